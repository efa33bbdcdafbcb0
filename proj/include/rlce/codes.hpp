#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "rlce/matrix.hpp"

namespace rlce {

// A linear code given by a (possibly redundant) generator matrix. Positions
// carry labels: the index a column had in the original code, kept stable
// through puncturing and shortening so that downstream bookkeeping can always
// talk about original positions.
class LinearCode {
public:
    LinearCode() = default;

    explicit LinearCode(Matrix gen) : gen_(std::move(gen)) {
        labels_.resize(gen_.cols());
        std::iota(labels_.begin(), labels_.end(), 0u);
    }

    LinearCode(Matrix gen, std::vector<std::uint32_t> labels)
        : gen_(std::move(gen)), labels_(std::move(labels)) {
        if (labels_.size() != gen_.cols())
            throw LengthMismatch("label count does not match generator width");
        for (std::size_t i = 1; i < labels_.size(); ++i)
            if (labels_[i - 1] >= labels_[i])
                throw InvalidParams("position labels must be strictly increasing");
    }

    const Matrix& generator() const { return gen_; }
    const GfPtr& field() const { return gen_.field(); }
    std::size_t length() const { return gen_.cols(); }
    const std::vector<std::uint32_t>& labels() const { return labels_; }

    std::size_t dim() const {
        if (!dim_cache_) dim_cache_ = rank(gen_);
        return *dim_cache_;
    }

    bool has_label(std::uint32_t lab) const {
        return std::binary_search(labels_.begin(), labels_.end(), lab);
    }

    std::size_t column_of_label(std::uint32_t lab) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), lab);
        if (it == labels_.end() || *it != lab) throw UnknownPosition("label not present in code");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    // generator with independent rows (rref basis)
    Matrix basis() const {
        auto [R, piv] = rref(gen_);
        Matrix b(field(), piv.size(), length());
        for (std::size_t i = 0; i < piv.size(); ++i)
            std::copy_n(R.row(i).data(), length(), b.row(i).data());
        dim_cache_ = piv.size();
        return b;
    }

private:
    Matrix gen_;
    std::vector<std::uint32_t> labels_;
    mutable std::optional<std::size_t> dim_cache_;
};

namespace detail {

inline std::vector<std::uint32_t> sorted_labels(std::span<const std::uint32_t> ls) {
    std::vector<std::uint32_t> v(ls.begin(), ls.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// column indices of the given labels, throwing on unknown ones
inline std::vector<std::uint32_t> columns_of(const LinearCode& c,
                                             std::span<const std::uint32_t> labs) {
    std::vector<std::uint32_t> idx;
    idx.reserve(labs.size());
    for (std::uint32_t lab : labs) idx.push_back(static_cast<std::uint32_t>(c.column_of_label(lab)));
    return idx;
}

} // namespace detail

// Remove the positions labelled by L; surviving positions keep their labels.
inline LinearCode puncture(const LinearCode& c, std::span<const std::uint32_t> L) {
    const auto drop = detail::sorted_labels(L);
    detail::columns_of(c, drop); // validate
    std::vector<std::uint32_t> keep_cols, keep_labels;
    keep_cols.reserve(c.length());
    for (std::uint32_t j = 0; j < c.length(); ++j) {
        const std::uint32_t lab = c.labels()[j];
        if (!std::binary_search(drop.begin(), drop.end(), lab)) {
            keep_cols.push_back(j);
            keep_labels.push_back(lab);
        }
    }
    return {c.generator().take_columns(keep_cols), std::move(keep_labels)};
}

// Keep exactly the positions labelled by L.
inline LinearCode restrict_to(const LinearCode& c, std::span<const std::uint32_t> L) {
    const auto keep = detail::sorted_labels(L);
    detail::columns_of(c, keep); // validate
    std::vector<std::uint32_t> drop;
    for (std::uint32_t lab : c.labels())
        if (!std::binary_search(keep.begin(), keep.end(), lab)) drop.push_back(lab);
    return puncture(c, drop);
}

// Shortening at L: puncture at L of the subcode of words vanishing on L.
inline LinearCode shorten(const LinearCode& c, std::span<const std::uint32_t> L) {
    const auto labs = detail::sorted_labels(L);
    if (labs.empty()) return c;
    const auto cols = detail::columns_of(c, labs);
    // rows of K combine generator rows into words vanishing on L
    const Matrix k = right_kernel(c.generator().take_columns(cols).transpose());
    Matrix sub(c.field(), k.rows(), c.length());
    for (std::size_t i = 0; i < k.rows(); ++i) {
        auto v = c.generator().left_mul_vector(k.row(i));
        std::copy(v.begin(), v.end(), sub.row(i).data());
    }
    return puncture(LinearCode(std::move(sub), c.labels()), labs);
}

inline LinearCode dual(const LinearCode& c) {
    return {right_kernel(c.generator()), c.labels()};
}

inline std::vector<gf_elem> star(const Gf& f, std::span<const gf_elem> a,
                                 std::span<const gf_elem> b) {
    std::vector<gf_elem> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = f.mul(a[j], b[j]);
    return out;
}

// Schur product of two codes on the same positions: the span of all
// componentwise products of codewords. Works from rref bases, so at most
// dim(a)*dim(b) product rows are formed.
inline LinearCode star_product(const LinearCode& a, const LinearCode& b) {
    require_same_field(a.field(), b.field());
    if (a.labels() != b.labels())
        throw LengthMismatch("star product requires identical positions");
    const Matrix ba = a.basis();
    const Matrix bb = b.basis();
    Matrix prod(a.field(), 0, a.length());
    for (std::size_t i = 0; i < ba.rows(); ++i)
        for (std::size_t j = 0; j < bb.rows(); ++j)
            prod.append_row(star(*a.field(), ba.row(i), bb.row(j)));
    return {std::move(prod), a.labels()};
}

// Square code from the (dim choose 2) + dim pairwise products of basis rows.
inline LinearCode square_code(const LinearCode& c) {
    const Matrix b = c.basis();
    Matrix prod(c.field(), 0, c.length());
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = i; j < b.rows(); ++j)
            prod.append_row(star(*c.field(), b.row(i), b.row(j)));
    return {std::move(prod), c.labels()};
}

// dim of the square code, without materializing it: product rows stream into
// an echelon accumulator and the loop stops once the ambient space is filled.
inline std::size_t square_dim(const LinearCode& c) {
    const Matrix b = c.basis();
    RowBasis acc(c.field(), c.length());
    for (std::size_t i = 0; i < b.rows() && !acc.full(); ++i)
        for (std::size_t j = i; j < b.rows(); ++j) {
            acc.insert(star(*c.field(), b.row(i), b.row(j)));
            if (acc.full()) break;
        }
    return acc.rank();
}

inline bool same_code(const LinearCode& a, const LinearCode& b) {
    return a.labels() == b.labels() && row_space_equal(a.generator(), b.generator());
}

} // namespace rlce

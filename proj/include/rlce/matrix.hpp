#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "rlce/gf.hpp"

namespace rlce {

// dst += c * src, elementwise over GF(2^m); addition is xor
inline void axpy_row(const Gf& f, std::span<gf_elem> dst, std::span<const gf_elem> src,
                     gf_elem c, std::size_t from = 0) {
    if (c == 0) return;
    if (f.has_tables()) {
        const std::uint16_t* lg = f.log_table();
        const gf_elem* al = f.antilog_table();
        const std::uint32_t lc = lg[c];
        for (std::size_t j = from; j < dst.size(); ++j) {
            const gf_elem s = src[j];
            if (s) dst[j] ^= al[lc + lg[s]];
        }
    } else {
        for (std::size_t j = from; j < dst.size(); ++j)
            if (src[j]) dst[j] ^= f.mul(c, src[j]);
    }
}

inline void scale_row(const Gf& f, std::span<gf_elem> row, gf_elem c) {
    for (auto& v : row) v = f.mul(v, c);
}

// Dense matrix over one GF(2^m) context, row-major, value semantics.
class Matrix {
public:
    Matrix() = default;
    Matrix(GfPtr field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    Matrix(GfPtr field, std::size_t rows, std::size_t cols,
           std::initializer_list<gf_elem> entries)
        : Matrix(std::move(field), rows, cols) {
        if (entries.size() != a_.size()) throw LengthMismatch("entry count does not match shape");
        std::copy(entries.begin(), entries.end(), a_.begin());
    }

    static Matrix identity(GfPtr field, std::size_t n) {
        Matrix m(std::move(field), n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    const GfPtr& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    gf_elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    gf_elem at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::span<gf_elem> row(std::size_t r) { return {a_.data() + r * cols_, cols_}; }
    std::span<const gf_elem> row(std::size_t r) const { return {a_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    Matrix mul(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (cols_ != o.rows_) throw LengthMismatch("matrix product shape mismatch");
        Matrix out(field_, rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k)
                axpy_row(*field_, out.row(r), o.row(k), at(r, k));
        return out;
    }

    std::vector<gf_elem> mul_vector(std::span<const gf_elem> v) const {
        if (v.size() != cols_) throw LengthMismatch("matrix-vector shape mismatch");
        std::vector<gf_elem> out(rows_, 0);
        for (std::size_t r = 0; r < rows_; ++r) {
            gf_elem acc = 0;
            for (std::size_t c = 0; c < cols_; ++c)
                if (at(r, c) && v[c]) acc ^= field_->mul(at(r, c), v[c]);
            out[r] = acc;
        }
        return out;
    }

    // row vector times matrix
    std::vector<gf_elem> left_mul_vector(std::span<const gf_elem> v) const {
        if (v.size() != rows_) throw LengthMismatch("vector-matrix shape mismatch");
        std::vector<gf_elem> out(cols_, 0);
        for (std::size_t r = 0; r < rows_; ++r)
            if (v[r]) axpy_row(*field_, out, row(r), v[r]);
        return out;
    }

    Matrix take_columns(std::span<const std::uint32_t> idx) const {
        Matrix out(field_, rows_, idx.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < idx.size(); ++j) out.at(r, j) = at(r, idx[j]);
        return out;
    }

    Matrix take_rows(std::span<const std::uint32_t> idx) const {
        Matrix out(field_, idx.size(), cols_);
        for (std::size_t j = 0; j < idx.size(); ++j)
            std::copy_n(row(idx[j]).data(), cols_, out.row(j).data());
        return out;
    }

    void append_row(std::span<const gf_elem> r) {
        if (r.size() != cols_) throw LengthMismatch("appended row has wrong length");
        a_.insert(a_.end(), r.begin(), r.end());
        ++rows_;
    }

    Matrix vstack(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (cols_ != o.cols_) throw LengthMismatch("vstack column mismatch");
        Matrix out = *this;
        out.a_.insert(out.a_.end(), o.a_.begin(), o.a_.end());
        out.rows_ += o.rows_;
        return out;
    }

    Matrix hstack(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (rows_ != o.rows_) throw LengthMismatch("hstack row mismatch");
        Matrix out(field_, rows_, cols_ + o.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::copy_n(row(r).data(), cols_, out.row(r).data());
            std::copy_n(o.row(r).data(), o.cols_, out.row(r).data() + cols_);
        }
        return out;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }

private:
    GfPtr field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<gf_elem> a_;
};

struct RrefResult {
    Matrix mat;
    std::vector<std::size_t> pivots; // strictly increasing column indices
};

// Reduced row-echelon form. Partial pivoting by first nonzero entry and a
// deterministic column sweep keep outputs reproducible; row space is
// preserved. Pivot entries are 1 and pivot columns are cleared elsewhere.
inline RrefResult rref(Matrix m) {
    const Gf& f = *m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
        if (sel == m.rows()) continue;
        m.swap_rows(r, sel);
        scale_row(f, m.row(r).subspan(c), f.inv(m.at(r, c)));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            const gf_elem factor = m.at(i, c);
            axpy_row(f, m.row(i), m.row(r), factor, c);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

// forward elimination only; cheaper than rref when only the rank is needed
inline std::size_t rank(Matrix m) {
    const Gf& f = *m.field();
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
        if (sel == m.rows()) continue;
        m.swap_rows(r, sel);
        const gf_elem pivinv = f.inv(m.at(r, c));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m.at(i, c) == 0) continue;
            axpy_row(f, m.row(i), m.row(r), f.mul(m.at(i, c), pivinv), c);
        }
        ++r;
    }
    return r;
}

// Basis of the right kernel {v : M v^T = 0}, one basis vector per row.
// Row count is always cols - rank(M).
inline Matrix right_kernel(const Matrix& m) {
    auto [R, pivots] = rref(m);
    std::vector<std::uint32_t> free_cols;
    {
        std::size_t p = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (p < pivots.size() && pivots[p] == c)
                ++p;
            else
                free_cols.push_back(static_cast<std::uint32_t>(c));
        }
    }
    Matrix k(m.field(), free_cols.size(), m.cols());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        k.at(j, free_cols[j]) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) k.at(j, pivots[i]) = R.at(i, free_cols[j]);
    }
    return k;
}

// Any solution x of M x = b, or nullopt when the system is inconsistent.
inline std::optional<std::vector<gf_elem>> solve(const Matrix& m, std::span<const gf_elem> b) {
    if (b.size() != m.rows()) throw LengthMismatch("rhs length does not match row count");
    Matrix rhs(m.field(), m.rows(), 1);
    for (std::size_t r = 0; r < m.rows(); ++r) rhs.at(r, 0) = b[r];
    auto [R, pivots] = rref(m.hstack(rhs));
    for (std::size_t p : pivots)
        if (p >= m.cols()) return std::nullopt;
    std::vector<gf_elem> x(m.cols(), 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = R.at(i, m.cols());
    return x;
}

// Simultaneous solve M X = B with one elimination; nullopt if any column of B
// is inconsistent.
inline std::optional<Matrix> solve_many(const Matrix& m, const Matrix& b) {
    if (b.rows() != m.rows()) throw LengthMismatch("rhs rows do not match");
    auto [R, pivots] = rref(m.hstack(b));
    for (std::size_t p : pivots)
        if (p >= m.cols()) return std::nullopt;
    Matrix x(m.field(), m.cols(), b.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x.at(pivots[i], j) = R.at(i, m.cols() + j);
    return x;
}

// Same rref <=> same row space; zero rows at the bottom are ignored.
inline bool row_space_equal(const Matrix& a, const Matrix& b) {
    require_same_field(a.field(), b.field());
    if (a.cols() != b.cols()) return false;
    auto ra = rref(a);
    auto rb = rref(b);
    if (ra.pivots != rb.pivots) return false;
    for (std::size_t i = 0; i < ra.pivots.size(); ++i)
        if (!std::ranges::equal(ra.mat.row(i), rb.mat.row(i))) return false;
    return true;
}

inline bool is_zero(std::span<const gf_elem> v) {
    for (gf_elem x : v)
        if (x) return false;
    return true;
}

// Incremental row-echelon accumulator: feed rows one at a time, rank grows
// monotonically. Lets square-code computations stop as soon as the span fills
// the ambient space instead of reducing every product row.
class RowBasis {
public:
    RowBasis(GfPtr field, std::size_t cols) : field_(std::move(field)), cols_(cols) {}

    // returns true if the row enlarged the span
    bool insert(std::vector<gf_elem> row) {
        const Gf& f = *field_;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const gf_elem v = row[lead_[i]];
            if (v) axpy_row(f, row, rows_[i], v, lead_[i]);
        }
        std::size_t lead = 0;
        while (lead < cols_ && row[lead] == 0) ++lead;
        if (lead == cols_) return false;
        scale_row(f, std::span<gf_elem>(row).subspan(lead), f.inv(row[lead]));
        // keep rows ordered by leading column so reduction stays one pass
        std::size_t pos = 0;
        while (pos < rows_.size() && lead_[pos] < lead) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(row));
        lead_.insert(lead_.begin() + pos, lead);
        return true;
    }

    std::size_t rank() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    bool full() const { return rows_.size() == cols_; }

    Matrix to_matrix() const {
        Matrix m(field_, rows_.size(), cols_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            std::copy(rows_[i].begin(), rows_[i].end(), m.row(i).data());
        return m;
    }

private:
    GfPtr field_;
    std::size_t cols_;
    std::vector<std::vector<gf_elem>> rows_;
    std::vector<std::size_t> lead_;
};

} // namespace rlce

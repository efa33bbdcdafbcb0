#pragma once

// Test-only oracles, independent of the library's implementation paths.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rlce/gf.hpp"
#include "rlce/grs.hpp"
#include "rlce/matrix.hpp"
#include "rlce/rng.hpp"

namespace oracles {

using rlce::Gf;
using rlce::gf_elem;

// schoolbook polynomial multiply over GF(2) followed by long division
inline gf_elem schoolbook_mul(int m, std::uint32_t poly, gf_elem a, gf_elem b) {
    std::uint64_t prod = 0;
    for (int i = 0; i <= 16; ++i)
        if (a >> i & 1)
            for (int j = 0; j <= 16; ++j)
                if (b >> j & 1) prod ^= std::uint64_t(1) << (i + j);
    for (int d = 32; d >= m; --d)
        if (prod >> d & 1) prod ^= std::uint64_t(poly) << (d - m);
    return static_cast<gf_elem>(prod);
}

// irreducibility by trial division with every polynomial of degree 1..m/2
inline bool irreducible_by_trial_division(std::uint32_t f, int m) {
    auto degree = [](std::uint64_t p) {
        int d = -1;
        while (p) {
            ++d;
            p >>= 1;
        }
        return d;
    };
    for (std::uint64_t div = 2; degree(div) <= m / 2; ++div) {
        std::uint64_t rem = f;
        const int dd = degree(div);
        for (int d = degree(rem); d >= dd; --d)
            if (rem >> d & 1) rem ^= div << (d - dd);
        if (rem == 0) return false;
    }
    return true;
}

// plain Gaussian elimination, written apart from the library's routines
inline std::size_t reference_rank(const Gf& f, std::vector<std::vector<gf_elem>> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            const gf_elem factor = f.div(rows[r][c], rows[rank][c]);
            for (std::size_t j = 0; j < cols; ++j)
                rows[r][j] ^= f.mul(factor, rows[rank][j]);
        }
        ++rank;
        if (rank == rows.size()) break;
    }
    return rank;
}

// all q^k codewords of a small code, from any generator basis
inline std::vector<std::vector<gf_elem>> enumerate_codewords(const rlce::Matrix& basis) {
    const Gf& f = *basis.field();
    const std::size_t k = basis.rows(), n = basis.cols(), q = f.order();
    std::vector<std::vector<gf_elem>> words;
    std::vector<gf_elem> coeff(k, 0);
    for (;;) {
        std::vector<gf_elem> w(n, 0);
        for (std::size_t i = 0; i < k; ++i)
            if (coeff[i])
                for (std::size_t j = 0; j < n; ++j)
                    w[j] ^= f.mul(coeff[i], basis.at(i, j));
        words.push_back(std::move(w));
        std::size_t i = 0;
        while (i < k && coeff[i] == static_cast<gf_elem>(q - 1)) coeff[i++] = 0;
        if (i == k) break;
        ++coeff[i];
    }
    return words;
}

// Nearest-codeword decoder via a coset-leader table: enumerate every error
// pattern of weight <= t and map its syndrome to the minimal-weight leader.
// Decoding then subtracts the leader; a missing syndrome means the received
// word is farther than t from every codeword.
class SyndromeDecoder {
public:
    SyndromeDecoder(const rlce::GrsParams& p, std::size_t t)
        : params_(p), t_(t), h_(rlce::right_kernel(rlce::grs_generator(p))) {
        const Gf& f = *p.field;
        const std::size_t n = p.length();
        std::vector<gf_elem> err(n, 0);
        std::vector<std::size_t> supp;
        build(f, err, supp, 0);
    }

    std::optional<std::pair<rlce::Poly, std::vector<std::size_t>>> decode(
        std::span<const gf_elem> received) const {
        auto it = table_.find(syndrome(received));
        if (it == table_.end()) return std::nullopt;
        std::vector<gf_elem> fixed(received.begin(), received.end());
        std::vector<std::size_t> positions;
        for (std::size_t j = 0; j < fixed.size(); ++j)
            if (it->second[j]) {
                fixed[j] ^= it->second[j];
                positions.push_back(j);
            }
        return std::make_pair(rlce::grs_interpolate(params_, fixed), positions);
    }

private:
    std::vector<gf_elem> syndrome(std::span<const gf_elem> word) const {
        return h_.mul_vector(word);
    }

    void build(const Gf& f, std::vector<gf_elem>& err, std::vector<std::size_t>& supp,
               std::size_t from) {
        const auto s = syndrome(err);
        const std::size_t weight = supp.size();
        auto it = table_.find(s);
        if (it == table_.end() || weight < count_nonzero(it->second)) table_[s] = err;
        if (weight == t_) return;
        for (std::size_t j = from; j < err.size(); ++j) {
            supp.push_back(j);
            for (std::uint32_t v = 1; v < f.order(); ++v) {
                err[j] = static_cast<gf_elem>(v);
                build(f, err, supp, j + 1);
            }
            err[j] = 0;
            supp.pop_back();
        }
    }

    static std::size_t count_nonzero(const std::vector<gf_elem>& v) {
        std::size_t c = 0;
        for (gf_elem x : v) c += x != 0;
        return c;
    }

    rlce::GrsParams params_;
    std::size_t t_;
    rlce::Matrix h_;
    std::map<std::vector<gf_elem>, std::vector<gf_elem>> table_;
};

// random GRS parameters with distinct support and nonzero multipliers
inline rlce::GrsParams random_grs(const rlce::GfPtr& field, std::size_t n, std::size_t k,
                                  rlce::Rng& rng) {
    rlce::GrsParams p;
    p.field = field;
    p.dim = k;
    auto vals = rng.sample_distinct(n, field->order());
    p.support.assign(vals.begin(), vals.end());
    p.multiplier.resize(n);
    for (auto& y : p.multiplier) y = rng.nonzero_element(*field);
    return p;
}

// uniformly random generator matrix (usually full rank)
inline rlce::Matrix random_matrix(const rlce::GfPtr& field, std::size_t rows, std::size_t cols,
                                  rlce::Rng& rng) {
    rlce::Matrix m(field, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rng.element(*field);
    return m;
}

} // namespace oracles

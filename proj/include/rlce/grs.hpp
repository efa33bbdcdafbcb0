#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "rlce/codes.hpp"
#include "rlce/matrix.hpp"
#include "rlce/poly.hpp"

namespace rlce {

// Generalised Reed-Solomon code parameters: pairwise-distinct support x,
// nonzero multiplier y, dimension k. Codewords are (y_j f(x_j))_j for
// polynomials f of degree < k.
struct GrsParams {
    GfPtr field;
    std::vector<gf_elem> support;
    std::vector<gf_elem> multiplier;
    std::size_t dim = 0;

    std::size_t length() const { return support.size(); }

    void validate() const {
        if (!field) throw InvalidParams("missing field context");
        if (support.size() != multiplier.size())
            throw LengthMismatch("support and multiplier lengths differ");
        if (dim < 1 || dim > support.size() || support.size() > field->order())
            throw InvalidParams("need 1 <= k <= n <= q");
        std::unordered_set<gf_elem> seen;
        for (gf_elem x : support)
            if (!seen.insert(x).second) throw InvalidSupport("support entries must be pairwise distinct");
        for (gf_elem y : multiplier)
            if (y == 0) throw ZeroMultiplier("multiplier entries must be nonzero");
    }
};

// k x n generator with rows (y_j x_j^i)_j, i = 0..k-1; always rank k.
inline Matrix grs_generator(const GrsParams& p) {
    p.validate();
    const Gf& f = *p.field;
    Matrix g(p.field, p.dim, p.length());
    for (std::size_t j = 0; j < p.length(); ++j) {
        gf_elem v = p.multiplier[j];
        for (std::size_t i = 0; i < p.dim; ++i) {
            g.at(i, j) = v;
            v = f.mul(v, p.support[j]);
        }
    }
    return g;
}

inline LinearCode grs_code(const GrsParams& p) { return LinearCode(grs_generator(p)); }

inline std::vector<gf_elem> grs_encode(const GrsParams& p, const Poly& f) {
    if (f.degree() >= static_cast<int>(p.dim))
        throw DegreeTooLarge("message polynomial degree must be < k");
    std::vector<gf_elem> c(p.length());
    for (std::size_t j = 0; j < p.length(); ++j)
        c[j] = p.field->mul(p.multiplier[j], f.eval(*p.field, p.support[j]));
    return c;
}

// Interpolate the unique f with deg f < k from values v_j = y_j f(x_j) given
// at >= k positions with known support/multiplier. Throws Inconsistent when
// the values do not lie on any such polynomial.
inline Poly grs_interpolate(const GfPtr& fp, std::span<const gf_elem> xs,
                            std::span<const gf_elem> ys, std::span<const gf_elem> values,
                            std::size_t k) {
    if (xs.size() != ys.size() || xs.size() != values.size())
        throw LengthMismatch("interpolation input lengths differ");
    if (xs.size() < k) throw InvalidParams("need at least k interpolation points");
    const Gf& f = *fp;
    Matrix m(fp, xs.size(), k);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        gf_elem v = ys[j];
        for (std::size_t i = 0; i < k; ++i) {
            m.at(j, i) = v;
            v = f.mul(v, xs[j]);
        }
    }
    auto sol = solve(m, values);
    if (!sol) throw Inconsistent("values are not consistent with any degree < k polynomial");
    return Poly(std::move(*sol));
}

inline Poly grs_interpolate(const GrsParams& p, std::span<const gf_elem> values) {
    return grs_interpolate(p.field, p.support, p.multiplier, values, p.dim);
}

struct GrsDecodeResult {
    Poly message;
    std::vector<std::size_t> error_positions;
};

// Berlekamp-Welch bounded-distance decoding: find f and an error locator E
// with deg E <= t, deg N <= k+t-1 and E(x_j) r_j / y_j = N(x_j) for all j,
// then f = N / E. Returns nullopt when no codeword lies within distance t.
inline std::optional<GrsDecodeResult> grs_decode(const GrsParams& p,
                                                 std::span<const gf_elem> received,
                                                 std::size_t t) {
    p.validate();
    if (received.size() != p.length()) throw LengthMismatch("received word has wrong length");
    if (t > (p.length() - p.dim) / 2)
        throw InvalidParams("error bound beyond half the designed distance");
    const Gf& f = *p.field;
    const std::size_t n = p.length(), k = p.dim;

    if (t == 0) {
        try {
            Poly msg = grs_interpolate(p, received);
            return GrsDecodeResult{std::move(msg), {}};
        } catch (const Inconsistent&) {
            return std::nullopt;
        }
    }

    // columns: E_0..E_t, N_0..N_{k+t-1}; rows: one identity per position
    const std::size_t en = t + 1, nn = k + t;
    Matrix sys(p.field, n, en + nn);
    for (std::size_t j = 0; j < n; ++j) {
        const gf_elem rj = f.div(received[j], p.multiplier[j]);
        gf_elem v = rj;
        for (std::size_t i = 0; i < en; ++i) {
            sys.at(j, i) = v;
            v = f.mul(v, p.support[j]);
        }
        v = 1;
        for (std::size_t i = 0; i < nn; ++i) {
            sys.at(j, en + i) = v;
            v = f.mul(v, p.support[j]);
        }
    }
    const Matrix kern = right_kernel(sys);
    if (kern.rows() == 0) return std::nullopt;

    const auto sol = kern.row(0);
    Poly e_loc(std::vector<gf_elem>(sol.begin(), sol.begin() + en));
    Poly n_poly(std::vector<gf_elem>(sol.begin() + en, sol.end()));
    if (e_loc.is_zero()) return std::nullopt; // cannot happen for t <= (n-k)/2, but be safe
    auto [quot, rem] = n_poly.divmod(f, e_loc);
    if (!rem.is_zero() || quot.degree() >= static_cast<int>(k)) return std::nullopt;

    const auto codeword = grs_encode(p, quot);
    std::vector<std::size_t> errs;
    for (std::size_t j = 0; j < n; ++j)
        if (codeword[j] != received[j]) errs.push_back(j);
    if (errs.size() > t) return std::nullopt;
    return GrsDecodeResult{std::move(quot), std::move(errs)};
}

} // namespace rlce

#pragma once

#include <span>
#include <vector>

#include "rlce/gf.hpp"

namespace rlce {

// Polynomial over GF(2^m), coefficients low-to-high, no trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<gf_elem> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly constant(gf_elem v) { return v ? Poly({v}) : Poly(); }
    static Poly x_plus(gf_elem a) { return Poly({a, 1}); } // X + a

    const std::vector<gf_elem>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero

    gf_elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    gf_elem leading() const { return c_.empty() ? 0 : c_.back(); }

    gf_elem eval(const Gf& f, gf_elem x) const {
        gf_elem acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = Gf::add(f.mul(acc, x), c_[i]);
        return acc;
    }

    Poly add(const Poly& o) const {
        std::vector<gf_elem> out(std::max(c_.size(), o.c_.size()), 0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeff(i) ^ o.coeff(i);
        return Poly(std::move(out));
    }

    Poly mul(const Gf& f, const Poly& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<gf_elem> out(c_.size() + o.c_.size() - 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                if (o.c_[j]) out[i + j] ^= f.mul(c_[i], o.c_[j]);
        }
        return Poly(std::move(out));
    }

    Poly scale(const Gf& f, gf_elem s) const {
        std::vector<gf_elem> out(c_);
        for (auto& v : out) v = f.mul(v, s);
        return Poly(std::move(out));
    }

    // quotient and remainder by a nonzero divisor
    std::pair<Poly, Poly> divmod(const Gf& f, const Poly& d) const {
        if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
        std::vector<gf_elem> rem(c_);
        const int dd = d.degree();
        if (degree() < dd) return {Poly(), *this};
        std::vector<gf_elem> quo(c_.size() - d.c_.size() + 1, 0);
        const gf_elem lead_inv = f.inv(d.leading());
        for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
            if (rem[i] == 0) continue;
            const gf_elem q = f.mul(rem[i], lead_inv);
            quo[i - dd] = q;
            for (int j = 0; j <= dd; ++j) rem[i - dd + j] ^= f.mul(q, d.c_[j]);
        }
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<gf_elem> c_;
};

} // namespace rlce

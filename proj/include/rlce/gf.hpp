#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rlce/errors.hpp"

namespace rlce {

// Element of GF(2^m), 2 <= m <= 16, as its integer representation in [0, 2^m).
// The owning Gf context defines the reduction polynomial; raw values only make
// sense together with one.
using gf_elem = std::uint16_t;

namespace gf2x {

// Polynomials over GF(2) packed into integers, bit i = coefficient of x^i.
// Degrees stay below 33 here, so std::uint64_t is always wide enough.

inline int degree(std::uint64_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
    }
    const int dm = degree(mod);
    for (int d = degree(r); d >= dm; --d)
        if (r >> d & 1) r ^= mod << (d - dm);
    return r;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        const int da = degree(a), db = degree(b);
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        a ^= b << (da - db);
    }
    return a;
}

// Rabin irreducibility test: f of degree m is irreducible over GF(2) iff
// x^(2^m) = x (mod f) and gcd(x^(2^(m/p)) - x, f) = 1 for every prime p | m.
inline bool irreducible(std::uint64_t f) {
    const int m = degree(f);
    if (m < 1) return false;
    if (m == 1) return true;

    std::vector<int> prime_divisors;
    int n = m;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            prime_divisors.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) prime_divisors.push_back(n);

    std::uint64_t x2i = 2; // x
    for (int i = 1; i <= m; ++i) {
        x2i = mulmod(x2i, x2i, f);
        for (int p : prime_divisors)
            if (i == m / p && gcd(x2i ^ 2u, f) != 1) return false;
    }
    return x2i == 2;
}

} // namespace gf2x

// Arithmetic context for GF(2^m) = GF(2)[x]/(reduction_poly). Immutable after
// construction; safe to share across threads. Multiplication uses log/antilog
// tables for m <= 12 and carry-less shift-and-reduce above.
class Gf {
public:
    Gf(int m, std::uint32_t reduction_poly) : m_(m), poly_(reduction_poly) {
        if (m < 2 || m > 16) throw InvalidParams("field degree must be in [2, 16]");
        if (gf2x::degree(poly_) != m)
            throw DegreeMismatch("reduction polynomial degree does not match field degree");
        if (!gf2x::irreducible(poly_))
            throw ReduciblePolynomial("reduction polynomial is reducible over GF(2)");
        order_ = 1u << m;
        if (m_ <= 12) build_tables();
    }

    int degree() const { return m_; }
    std::uint32_t modulus() const { return poly_; }
    std::uint32_t order() const { return order_; } // q = 2^m

    bool operator==(const Gf& o) const { return m_ == o.m_ && poly_ == o.poly_; }
    bool operator!=(const Gf& o) const { return !(*this == o); }

    static gf_elem add(gf_elem a, gf_elem b) { return a ^ b; }
    static gf_elem sub(gf_elem a, gf_elem b) { return a ^ b; }

    gf_elem mul(gf_elem a, gf_elem b) const {
        if (!has_tables_) return mul_noluts(a, b);
        if (a == 0 || b == 0) return 0;
        return antilog_[log_[a] + log_[b]];
    }

    gf_elem inv(gf_elem a) const {
        if (a == 0) throw DivisionByZero("inverse of zero field element");
        if (has_tables_) return antilog_[order_ - 1 - log_[a]];
        return pow(a, order_ - 2);
    }

    gf_elem div(gf_elem a, gf_elem b) const {
        if (b == 0) throw DivisionByZero("division by zero field element");
        if (a == 0) return 0;
        if (has_tables_) return antilog_[log_[a] + order_ - 1 - log_[b]];
        return mul(a, inv(b));
    }

    gf_elem pow(gf_elem a, std::uint32_t e) const {
        gf_elem r = 1, base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    bool has_tables() const { return has_tables_; }

    // log of a nonzero element w.r.t. the table generator
    std::uint32_t log(gf_elem a) const {
        if (a == 0) throw DivisionByZero("log of zero field element");
        return log_[a];
    }
    gf_elem exp(std::uint32_t i) const { return antilog_[i % (order_ - 1)]; }

    // Raw table access for elimination inner loops. Only valid when
    // has_tables(); antilog is doubled so log_a + log_b never needs a wrap.
    const std::uint16_t* log_table() const { return log_.data(); }
    const gf_elem* antilog_table() const { return antilog_.data(); }

private:
    gf_elem mul_noluts(gf_elem a, gf_elem b) const {
        std::uint32_t r = 0, aa = a;
        std::uint32_t bb = b;
        while (bb) {
            if (bb & 1) r ^= aa;
            aa <<= 1;
            if (aa >> m_ & 1) aa ^= poly_;
            bb >>= 1;
        }
        return static_cast<gf_elem>(r);
    }

    void build_tables() {
        // any generator of the multiplicative group works; the reduction
        // polynomial need not be primitive
        const std::uint32_t group = order_ - 1;
        std::vector<std::uint32_t> prime_divisors;
        std::uint32_t n = group;
        for (std::uint32_t p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                prime_divisors.push_back(p);
                while (n % p == 0) n /= p;
            }
        if (n > 1) prime_divisors.push_back(n);

        gf_elem g = 0;
        for (std::uint32_t cand = 2; cand < order_; ++cand) {
            bool ok = true;
            for (std::uint32_t p : prime_divisors)
                if (pow_noluts(static_cast<gf_elem>(cand), group / p) == 1) {
                    ok = false;
                    break;
                }
            if (ok) {
                g = static_cast<gf_elem>(cand);
                break;
            }
        }

        log_.assign(order_, 0);
        antilog_.assign(2 * group, 0);
        gf_elem cur = 1;
        for (std::uint32_t i = 0; i < group; ++i) {
            antilog_[i] = cur;
            antilog_[i + group] = cur;
            log_[cur] = static_cast<std::uint16_t>(i);
            cur = mul_noluts(cur, g);
        }
        has_tables_ = true;
    }

    gf_elem pow_noluts(gf_elem a, std::uint32_t e) const {
        gf_elem r = 1, base = a;
        while (e) {
            if (e & 1) r = mul_noluts(r, base);
            base = mul_noluts(base, base);
            e >>= 1;
        }
        return r;
    }

    int m_;
    std::uint32_t poly_;
    std::uint32_t order_;
    bool has_tables_ = false;
    std::vector<std::uint16_t> log_;
    std::vector<gf_elem> antilog_;
};

using GfPtr = std::shared_ptr<const Gf>;

inline GfPtr make_field(int m, std::uint32_t reduction_poly) {
    return std::make_shared<const Gf>(m, reduction_poly);
}

// Default reduction polynomials, one irreducible per degree. The scheme is
// polynomial-agnostic; keys record the polynomial they were generated with.
inline std::uint32_t default_reduction_poly(int m) {
    switch (m) {
        case 2: return 0x7;      // x^2+x+1
        case 3: return 0xB;      // x^3+x+1
        case 4: return 0x13;     // x^4+x+1
        case 5: return 0x25;     // x^5+x^2+1
        case 6: return 0x43;     // x^6+x+1
        case 7: return 0x83;     // x^7+x+1
        case 8: return 0x11D;    // x^8+x^4+x^3+x^2+1
        case 9: return 0x211;    // x^9+x^4+1
        case 10: return 0x409;   // x^10+x^3+1
        case 11: return 0x805;   // x^11+x^2+1
        case 12: return 0x1053;  // x^12+x^6+x^4+x+1
        case 13: return 0x201B;  // x^13+x^4+x^3+x+1
        case 14: return 0x4443;  // x^14+x^10+x^6+x+1
        case 15: return 0x8003;  // x^15+x+1
        case 16: return 0x1100B; // x^16+x^12+x^3+x+1
        default: throw InvalidParams("no default reduction polynomial for this degree");
    }
}

inline GfPtr make_default_field(int m) { return make_field(m, default_reduction_poly(m)); }

inline void require_same_field(const GfPtr& a, const GfPtr& b) {
    if (a == b) return;
    if (!a || !b || *a != *b) throw ContextMismatch("operands belong to different fields");
}

} // namespace rlce

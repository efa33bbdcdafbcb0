#include <doctest.h>

#include "oracles.hpp"
#include "rlce/gf.hpp"
#include "rlce/rng.hpp"

using namespace rlce;

TEST_CASE("field construction accepts irreducible polynomials") {
    CHECK(make_field(10, 0x409)->order() == 1024); // x^10+x^3+1
    CHECK(make_field(3, 0xB)->degree() == 3);      // x^3+x+1
    CHECK_THROWS_AS(make_field(3, 0x9), ReduciblePolynomial); // x^3+1 = (x+1)(x^2+x+1)
    CHECK_THROWS_AS(make_field(3, 0x13), DegreeMismatch);
    CHECK_THROWS_AS(make_field(1, 0x3), InvalidParams);
    CHECK_THROWS_AS(make_field(17, 0x3), InvalidParams);
}

TEST_CASE("default polynomials are irreducible and match the trial-division oracle") {
    for (int m = 2; m <= 16; ++m) {
        const auto poly = default_reduction_poly(m);
        CHECK_NOTHROW(make_field(m, poly));
        CHECK(oracles::irreducible_by_trial_division(poly, m));
    }
    // cross-check the built-in test against the oracle on every degree-10 poly
    for (std::uint32_t p = 1u << 10; p < (1u << 11); ++p)
        CHECK(gf2x::irreducible(p) == oracles::irreducible_by_trial_division(p, 10));
}

TEST_CASE("multiplication basics") {
    const auto f8 = make_field(3, 0xB);
    CHECK(f8->mul(0b011, 0b101) == 0b100);
    const auto f = make_default_field(10);
    Rng rng(Seed{1}, "mul");
    for (int i = 0; i < 200; ++i) {
        const gf_elem a = rng.element(*f);
        CHECK(f->mul(a, 1) == a);
        CHECK(f->mul(a, 0) == 0);
        CHECK(f->mul(0, a) == 0);
    }
}

TEST_CASE("table multiplication agrees with the schoolbook oracle") {
    for (int m : {3, 4, 8}) {
        const auto f = make_default_field(m);
        for (std::uint32_t a = 0; a < f->order(); ++a)
            for (std::uint32_t b = 0; b < f->order(); ++b)
                CHECK(f->mul(static_cast<gf_elem>(a), static_cast<gf_elem>(b)) ==
                      oracles::schoolbook_mul(m, f->modulus(), static_cast<gf_elem>(a),
                                              static_cast<gf_elem>(b)));
    }
    for (int m : {10, 16}) {
        const auto f = make_default_field(m);
        Rng rng(Seed{2}, "oracle" + std::to_string(m));
        for (int i = 0; i < 5000; ++i) {
            const gf_elem a = rng.element(*f), b = rng.element(*f);
            CHECK(f->mul(a, b) == oracles::schoolbook_mul(m, f->modulus(), a, b));
        }
    }
}

TEST_CASE("inversion") {
    const auto f = make_default_field(8);
    CHECK(f->inv(1) == 1);
    CHECK_THROWS_AS(f->inv(0), DivisionByZero);
    for (std::uint32_t a = 1; a < f->order(); ++a)
        CHECK(f->mul(static_cast<gf_elem>(a), f->inv(static_cast<gf_elem>(a))) == 1);
    const auto f16 = make_default_field(16);
    Rng rng(Seed{3}, "inv16");
    for (int i = 0; i < 500; ++i) {
        const gf_elem a = rng.nonzero_element(*f16);
        CHECK(f16->mul(a, f16->inv(a)) == 1);
    }
}

TEST_CASE("field axioms hold exhaustively for m <= 8") {
    for (int m = 2; m <= 8; ++m) {
        const auto fp = make_default_field(m);
        const Gf& f = *fp;
        const std::uint32_t q = f.order();
        for (std::uint32_t a = 0; a < q; ++a) {
            CHECK(Gf::add(static_cast<gf_elem>(a), static_cast<gf_elem>(a)) == 0);
            for (std::uint32_t b = 0; b < q; ++b) {
                const auto ab = static_cast<gf_elem>(Gf::add(static_cast<gf_elem>(a),
                                                             static_cast<gf_elem>(b)));
                // Frobenius
                REQUIRE(f.mul(ab, ab) == Gf::add(f.mul(static_cast<gf_elem>(a), static_cast<gf_elem>(a)),
                                                 f.mul(static_cast<gf_elem>(b), static_cast<gf_elem>(b))));
                for (std::uint32_t c = 0; c < q; ++c) {
                    const auto ea = static_cast<gf_elem>(a), eb = static_cast<gf_elem>(b),
                               ec = static_cast<gf_elem>(c);
                    REQUIRE(f.mul(f.mul(ea, eb), ec) == f.mul(ea, f.mul(eb, ec)));
                    REQUIRE(f.mul(ea, Gf::add(eb, ec)) == Gf::add(f.mul(ea, eb), f.mul(ea, ec)));
                }
            }
        }
    }
}

TEST_CASE("field axioms hold on samples for m in {10, 11, 16}") {
    for (int m : {10, 11, 16}) {
        const auto fp = make_default_field(m);
        const Gf& f = *fp;
        Rng rng(Seed{4}, "axioms" + std::to_string(m));
        for (int i = 0; i < 20000; ++i) {
            const gf_elem a = rng.element(f), b = rng.element(f), c = rng.element(f);
            REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            REQUIRE(f.mul(a, Gf::add(b, c)) == Gf::add(f.mul(a, b), f.mul(a, c)));
            REQUIRE(Gf::add(a, a) == 0);
            const gf_elem ab = Gf::add(a, b);
            REQUIRE(f.mul(ab, ab) == Gf::add(f.mul(a, a), f.mul(b, b)));
        }
    }
}

TEST_CASE("log/antilog tables are mutually inverse") {
    for (int m : {3, 8, 10, 12}) {
        const auto f = make_default_field(m);
        REQUIRE(f->has_tables());
        for (std::uint32_t a = 1; a < f->order(); ++a)
            CHECK(f->exp(f->log(static_cast<gf_elem>(a))) == a);
    }
    CHECK_FALSE(make_default_field(13)->has_tables());
    CHECK_FALSE(make_default_field(16)->has_tables());
}

TEST_CASE("pow and div") {
    const auto f = make_default_field(10);
    Rng rng(Seed{5}, "powdiv");
    for (int i = 0; i < 300; ++i) {
        const gf_elem a = rng.nonzero_element(*f);
        CHECK(f->pow(a, f->order() - 1) == 1); // Lagrange
        const gf_elem b = rng.nonzero_element(*f);
        CHECK(f->mul(f->div(a, b), b) == a);
    }
    CHECK_THROWS_AS(f->div(1, 0), DivisionByZero);
}

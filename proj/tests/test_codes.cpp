#include <doctest.h>

#include "oracles.hpp"
#include "rlce/codes.hpp"
#include "rlce/grs.hpp"
#include "rlce/rng.hpp"

using namespace rlce;

namespace {

const GfPtr F = make_default_field(10);

LinearCode random_code(std::size_t k, std::size_t n, Rng& rng) {
    return LinearCode(oracles::random_matrix(F, k, n, rng));
}

LinearCode full_space(std::size_t n) { return LinearCode(Matrix::identity(F, n)); }

std::vector<std::uint32_t> random_label_subset(const LinearCode& c, std::size_t size, Rng& rng) {
    auto idx = rng.sample_distinct(size, static_cast<std::uint32_t>(c.length()));
    std::vector<std::uint32_t> L(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) L[i] = c.labels()[idx[i]];
    std::sort(L.begin(), L.end());
    return L;
}

LinearCode permuted(const LinearCode& c, const std::vector<std::uint32_t>& sigma) {
    Matrix g(c.field(), c.generator().rows(), c.length());
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t j = 0; j < c.length(); ++j) g.at(r, sigma[j]) = c.generator().at(r, j);
    return LinearCode(std::move(g));
}

} // namespace

TEST_CASE("puncture") {
    Rng rng(Seed{20}, "puncture");
    const LinearCode c = random_code(3, 6, rng);
    CHECK(same_code(puncture(c, std::vector<std::uint32_t>{}), c));

    const auto p = puncture(full_space(3), std::vector<std::uint32_t>{1});
    CHECK(p.length() == 2);
    CHECK(p.dim() == 2);
    CHECK(p.labels() == std::vector<std::uint32_t>{0, 2});

    const auto grs = grs_code(oracles::random_grs(F, 8, 3, rng));
    const auto pg = puncture(grs, std::vector<std::uint32_t>{0});
    CHECK(pg.length() == 7);
    CHECK(pg.dim() == 3);

    CHECK_THROWS_AS(puncture(c, std::vector<std::uint32_t>{99}), UnknownPosition);
}

TEST_CASE("restrict") {
    Rng rng(Seed{21}, "restrict");
    const LinearCode c = random_code(4, 9, rng);
    CHECK(same_code(restrict_to(c, c.labels()), c));
    CHECK(restrict_to(c, std::vector<std::uint32_t>{}).length() == 0);

    for (int trial = 0; trial < 50; ++trial) {
        const LinearCode cc = random_code(1 + rng.below(5), 4 + rng.below(8), rng);
        const auto L = random_label_subset(cc, rng.below(cc.length() + 1), rng);
        std::vector<std::uint32_t> complement;
        for (std::uint32_t lab : cc.labels())
            if (!std::binary_search(L.begin(), L.end(), lab)) complement.push_back(lab);
        CHECK(same_code(restrict_to(cc, L), puncture(cc, complement)));
    }
}

TEST_CASE("shorten") {
    Rng rng(Seed{22}, "shorten");
    const auto s = shorten(full_space(5), std::vector<std::uint32_t>{0});
    CHECK(s.length() == 4);
    CHECK(s.dim() == 4);

    const LinearCode c = random_code(4, 9, rng);
    CHECK(same_code(shorten(c, std::vector<std::uint32_t>{}), c));

    // shortening a GRS code at one position drops the dimension by one
    const auto grs = grs_code(oracles::random_grs(F, 12, 5, rng));
    for (std::uint32_t i : {0u, 4u, 11u}) {
        const auto sg = shorten(grs, std::vector<std::uint32_t>{i});
        CHECK(sg.dim() == 4);
        CHECK(sg.length() == 11);
    }

    for (int trial = 0; trial < 30; ++trial) {
        const LinearCode cc = random_code(2 + rng.below(5), 6 + rng.below(8), rng);
        const auto L = random_label_subset(cc, 1 + rng.below(4), rng);
        CHECK(shorten(cc, L).dim() + L.size() >= cc.dim());
    }
}

TEST_CASE("dual") {
    Rng rng(Seed{23}, "dual");
    CHECK(dual(full_space(4)).dim() == 0);

    for (int trial = 0; trial < 20; ++trial) {
        const LinearCode c = random_code(1 + rng.below(5), 4 + rng.below(8), rng);
        CHECK(same_code(dual(dual(c)), c));
        CHECK(dual(c).dim() + c.dim() == c.length());
    }
}

TEST_CASE("duality identities for shortening and puncturing") {
    for (const auto& field : {F, make_default_field(6)}) {
        Rng rng(Seed{24}, "dualshort");
        for (int trial = 0; trial < 100; ++trial) {
            const LinearCode c(
                oracles::random_matrix(field, 2 + rng.below(5), 6 + rng.below(10), rng));
            const auto L = random_label_subset(c, 1 + rng.below(4), rng);
            CHECK(same_code(shorten(dual(c), L), dual(puncture(c, L))));
            CHECK(same_code(dual(shorten(c, L)), puncture(dual(c), L)));
        }
    }
}

TEST_CASE("star product basics") {
    const Matrix ones(F, 1, 3, {1, 1, 1});
    const LinearCode a{ones};
    const auto sq = star_product(a, a);
    CHECK(sq.dim() == 1);
    CHECK(same_code(sq, a));

    Rng rng(Seed{25}, "star");
    const LinearCode b = random_code(3, 12, rng);
    const LinearCode c = random_code(2, 12, rng);
    CHECK(same_code(star_product(b, c), star_product(c, b)));

    CHECK_THROWS_AS(star_product(b, random_code(2, 11, rng)), LengthMismatch);

    // monotone under subcodes: rows 0..1 of b span a subcode
    Matrix sub(F, 2, 12);
    for (std::size_t r = 0; r < 2; ++r)
        std::copy_n(b.generator().row(r).data(), 12, sub.row(r).data());
    const auto small = star_product(LinearCode(std::move(sub)), c);
    const auto big = star_product(b, c);
    const Matrix stacked = big.generator().vstack(small.generator());
    CHECK(rank(stacked) == big.dim());
}

TEST_CASE("squares of GRS codes have dimension 2k-1") {
    Rng rng(Seed{26}, "grssquare");
    const auto p = oracles::random_grs(F, 20, 5, rng);
    const auto c = grs_code(p);
    CHECK(square_dim(c) == 9);

    // the square is the GRS code with squared multiplier and dimension 2k-1
    GrsParams sq;
    sq.field = F;
    sq.support = p.support;
    sq.dim = 2 * p.dim - 1;
    sq.multiplier.resize(p.length());
    for (std::size_t j = 0; j < p.length(); ++j)
        sq.multiplier[j] = F->mul(p.multiplier[j], p.multiplier[j]);
    CHECK(same_code(square_code(c), grs_code(sq)));
}

TEST_CASE("squares of random codes are typically full") {
    Rng rng(Seed{27}, "randsquare");
    int expected_dim_hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const LinearCode c = random_code(6, 20, rng);
        expected_dim_hits += square_dim(c) == 20; // min(20, binom(7,2)=21)
    }
    CHECK(expected_dim_hits >= 95);
}

TEST_CASE("square dimension is invariant under permutations") {
    Rng rng(Seed{28}, "sqperm");
    for (int trial = 0; trial < 10; ++trial) {
        const LinearCode c = random_code(4, 14, rng);
        const auto sigma = rng.permutation(14);
        CHECK(square_dim(c) == square_dim(permuted(c, sigma)));
    }
    CHECK(square_dim(LinearCode(Matrix(F, 2, 5))) == 0); // zero code
}

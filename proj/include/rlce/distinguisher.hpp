#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rlce/codes.hpp"
#include "rlce/rlce.hpp"
#include "rlce/rng.hpp"

namespace rlce {

// Dimension bound for the square of a shortened RLCE public code:
// min(n+w-ell, 2(k+w-ell)-1), clamped at zero.
inline std::size_t theorem_bound(const RlceParams& p, std::size_t ell) {
    const long long len = static_cast<long long>(p.n + p.w) - static_cast<long long>(ell);
    const long long odd = 2 * (static_cast<long long>(p.k + p.w) - static_cast<long long>(ell)) - 1;
    const long long b = std::min(len, odd);
    return b > 0 ? static_cast<std::size_t>(b) : 0;
}

// Typical square dimension of a random code of the shortened shape:
// min(n+w-ell, binom(k-ell+1, 2)).
inline std::size_t random_square_baseline(const RlceParams& p, std::size_t ell) {
    const long long len = static_cast<long long>(p.n + p.w) - static_cast<long long>(ell);
    const long long kk = static_cast<long long>(p.k) - static_cast<long long>(ell);
    const long long binom = kk > 0 ? kk * (kk + 1) / 2 : 0;
    const long long b = std::min(len, binom);
    return b > 0 ? static_cast<std::size_t>(b) : 0;
}

struct DistinguisherInterval {
    std::size_t ell_min = 0;
    std::size_t ell_max = 0;
};

// Shortening sizes for which the squared shortened code stays below both the
// ambient dimension and the random-code baseline:
//   w + 2k - n <= ell < k - (3 + sqrt(16w+1))/2.
// The upper end is evaluated in exact integer arithmetic. Returns nullopt
// when the interval is empty, in particular whenever w = n - k.
inline std::optional<DistinguisherInterval> distinguisher_interval(const RlceParams& p) {
    const long long lo_raw = static_cast<long long>(p.w) + 2 * static_cast<long long>(p.k) -
                             static_cast<long long>(p.n);
    const std::size_t lo = lo_raw > 0 ? static_cast<std::size_t>(lo_raw) : 0;

    // smallest d = k - ell with 2d-3 > 0 and (2d-3)^2 > 16w+1
    const long long rhs = 16 * static_cast<long long>(p.w) + 1;
    long long d = 2;
    while ((2 * d - 3) * (2 * d - 3) <= rhs) ++d;
    const long long hi_raw = static_cast<long long>(p.k) - d;
    if (hi_raw < 0 || static_cast<std::size_t>(hi_raw) < lo) return std::nullopt;
    return DistinguisherInterval{lo, static_cast<std::size_t>(hi_raw)};
}

// ell in the middle of the interval, kept strictly below ell_max so that
// ell+1 stays inside too (the twin matching step shortens one extra position).
inline std::size_t default_shortening_size(const DistinguisherInterval& iv) {
    const std::size_t mid = (iv.ell_min + iv.ell_max) / 2;
    return mid < iv.ell_max ? mid : iv.ell_max - (iv.ell_max > iv.ell_min ? 1 : 0);
}

struct ShorteningReport {
    std::vector<std::uint32_t> shortening_set;
    std::size_t observed_dim = 0;
    std::size_t bound = 0;    // structural bound; never exceeded by honest keys
    std::size_t baseline = 0; // typical random-code square dimension
    bool distinguished = false;
};

inline ShorteningReport shortened_square_report(const LinearCode& c,
                                                std::span<const std::uint32_t> L,
                                                const RlceParams& p) {
    ShorteningReport rep;
    rep.shortening_set.assign(L.begin(), L.end());
    rep.observed_dim = square_dim(shorten(c, L));
    rep.bound = theorem_bound(p, L.size());
    rep.baseline = random_square_baseline(p, L.size());
    rep.distinguished = rep.observed_dim < rep.baseline;
    return rep;
}

struct DistinguishVerdict {
    bool rlce_like = false;
    std::size_t positive_trials = 0;
    std::vector<ShorteningReport> evidence; // in trial order
};

inline std::vector<std::uint32_t> sample_shortening_set(const LinearCode& c, std::size_t ell,
                                                        const Seed& seed,
                                                        std::string_view label) {
    Rng rng(seed, label);
    auto idx = rng.sample_distinct(ell, static_cast<std::uint32_t>(c.length()));
    std::vector<std::uint32_t> L(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) L[i] = c.labels()[idx[i]];
    std::sort(L.begin(), L.end());
    return L;
}

// Majority verdict over `trials` random shortening sets of the default size.
// Trials are independent and deterministic given the seed, so they may run on
// several threads; evidence keeps trial order either way.
inline DistinguishVerdict is_rlce_like(const LinearCode& c, const RlceParams& p,
                                       std::size_t trials, const Seed& seed,
                                       unsigned threads = 1) {
    const auto iv = distinguisher_interval(p);
    if (!iv) throw NotDistinguishable("empty distinguisher interval for these parameters");
    const std::size_t ell = default_shortening_size(*iv);

    DistinguishVerdict v;
    v.evidence.resize(trials);
    auto run_trial = [&](std::size_t i) {
        const auto L = sample_shortening_set(c, ell, seed, "L" + std::to_string(i));
        v.evidence[i] = shortened_square_report(c, L, p);
    };
    if (threads <= 1 || trials <= 1) {
        for (std::size_t i = 0; i < trials; ++i) run_trial(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        const unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(trials));
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1))
                    run_trial(i);
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& rep : v.evidence)
        if (rep.distinguished) ++v.positive_trials;
    v.rlce_like = 2 * v.positive_trials > trials;
    return v;
}

} // namespace rlce

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlce/errors.hpp"
#include "rlce/gf.hpp"

namespace rlce {

using Seed = std::vector<std::uint8_t>;

inline Seed seed_from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.empty() || hex.size() % 2 != 0)
        throw FileFormatError("seed must be a nonempty even-length hex string");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FileFormatError("invalid hex digit in seed");
    };
    Seed out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

inline std::string seed_to_hex(std::span<const std::uint8_t> seed) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * seed.size());
    for (std::uint8_t b : seed) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

// Deterministic stream of pseudo-random values derived from a master seed and
// a stream label. mt19937_64 and seed_seq are fully specified by the standard,
// and all derived quantities below avoid implementation-defined distributions,
// so identical (seed, label) pairs produce identical output on any platform.
// One master seed splits into independent streams by label ("x", "y", "A",
// "pi", ...), letting tests pin any single component of keygen.
class Rng {
public:
    Rng(std::span<const std::uint8_t> master, std::string_view label) {
        std::vector<std::uint32_t> material;
        material.reserve(master.size() + label.size() + 1);
        for (std::uint8_t b : master) material.push_back(b);
        material.push_back(0x5eed);
        for (char c : label) material.push_back(static_cast<std::uint8_t>(c));
        std::seed_seq seq(material.begin(), material.end());
        gen_.seed(seq);
    }

    std::uint64_t next() { return gen_(); }

    // uniform in [0, bound), unbiased via rejection on a power-of-two mask
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw InvalidParams("Rng::below with zero bound");
        std::uint64_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t v = gen_() & mask;
            if (v < bound) return v;
        }
    }

    gf_elem element(const Gf& f) { return static_cast<gf_elem>(below(f.order())); }

    gf_elem nonzero_element(const Gf& f) {
        return static_cast<gf_elem>(1 + below(f.order() - 1));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    // n distinct values from [0, universe)
    std::vector<std::uint32_t> sample_distinct(std::size_t n, std::uint32_t universe) {
        if (n > universe) throw InvalidParams("cannot sample more distinct values than the universe holds");
        std::vector<std::uint32_t> all(universe);
        std::iota(all.begin(), all.end(), 0u);
        shuffle(all);
        all.resize(n);
        return all;
    }

    std::vector<std::uint32_t> permutation(std::uint32_t n) {
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        shuffle(p);
        return p;
    }

    Seed derive_seed(std::size_t bytes = 16) {
        Seed s(bytes);
        for (auto& b : s) b = static_cast<std::uint8_t>(below(256));
        return s;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace rlce

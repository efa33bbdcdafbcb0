#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlce/grs.hpp"
#include "rlce/rng.hpp"

namespace rlce {

struct RlceParams {
    int m = 10;                     // field degree, q = 2^m
    std::uint32_t reduction_poly = 0; // 0 = use the default for m
    std::size_t n = 0, k = 0, w = 0, t = 0;

    std::size_t q() const { return std::size_t(1) << m; }
    std::size_t code_length() const { return n + w; }

    void validate() const {
        if (m < 2 || m > 16) throw InvalidParams("field degree out of range");
        if (n == 0 || k == 0 || k >= n) throw InvalidParams("need 0 < k < n");
        if (w > n) throw InvalidParams("need w <= n");
        if (t > (n - k) / 2) throw InvalidParams("need t <= (n-k)/2");
        if (n > q()) throw InvalidParams("need n <= q for a distinct support");
    }

    GfPtr make_context() const {
        return reduction_poly ? make_field(m, reduction_poly) : make_default_field(m);
    }

    bool operator==(const RlceParams&) const = default;
};

// Parameter presets id0..id5. Odd ids have w strictly below n-k, even ids
// have w = n-k.
inline RlceParams preset_params(std::string_view name) {
    if (name == "id0") return {10, 0, 630, 470, 160, 80};
    if (name == "id1") return {10, 0, 532, 376, 96, 78};
    if (name == "id2") return {10, 0, 1000, 764, 236, 118};
    if (name == "id3") return {10, 0, 846, 618, 144, 114};
    if (name == "id4") return {11, 0, 1360, 800, 560, 280};
    if (name == "id5") return {11, 0, 1160, 700, 311, 230};
    throw InvalidParams("unknown preset (expected id0..id5)");
}

inline const std::array<std::string, 6>& preset_names() {
    static const std::array<std::string, 6> names = {"id0", "id1", "id2",
                                                     "id3", "id4", "id5"};
    return names;
}

// One 2x2 column mixer [[a, b], [c, d]]; applied on the right of the column
// pair (grs | random), so the mixed columns are (a*g + c*r, b*g + d*r).
struct TwinMixer {
    gf_elem a = 1, b = 0, c = 0, d = 1;

    gf_elem det(const Gf& f) const { return Gf::add(f.mul(a, d), f.mul(b, c)); }
    bool degenerate(const Gf& f) const { return f.mul(c, d) == 0; }
};

struct RlceSecretKey {
    RlceParams params;
    GfPtr field;
    GrsParams grs;                    // hidden support x and multiplier y, dim k
    std::vector<TwinMixer> mixers;    // one per random column
    std::vector<std::uint32_t> perm;  // perm[j] = public position of pre-permutation column j
    Matrix random_cols;               // k x w, column s inserted after grs column n-w+s
    Seed seed;
};

struct RlcePublicKey {
    RlceParams params;
    GfPtr field;
    Matrix g; // k x (n+w)

    LinearCode code() const { return LinearCode(g); }
};

struct RlceKeyPair {
    RlcePublicKey pub;
    RlceSecretKey sec;
};

struct KeygenOptions {
    // resample any mixer with c*d = 0 so every twin pair is pseudo-random
    bool force_nondegenerate = true;
    // test hook: force entry 'c' or 'd' of the given mixer to zero
    std::vector<std::pair<std::size_t, char>> forced_zero;
};

namespace detail {

inline TwinMixer sample_mixer(Rng& rng, const Gf& f, bool force_nondegenerate) {
    for (;;) {
        TwinMixer mx{rng.element(f), rng.element(f), rng.element(f), rng.element(f)};
        if (mx.det(f) == 0) continue;
        if (force_nondegenerate && mx.degenerate(f)) continue;
        return mx;
    }
}

inline TwinMixer sample_degenerate_mixer(Rng& rng, const Gf& f, char zero_entry) {
    // c = 0 needs a*d != 0; d = 0 needs b*c != 0
    TwinMixer mx;
    if (zero_entry == 'c') {
        mx = {rng.nonzero_element(f), rng.element(f), 0, rng.nonzero_element(f)};
    } else if (zero_entry == 'd') {
        mx = {rng.element(f), rng.nonzero_element(f), rng.nonzero_element(f), 0};
    } else {
        throw InvalidParams("forced zero entry must be 'c' or 'd'");
    }
    return mx;
}

} // namespace detail

// Pre-permutation column layout: the first n-w columns are plain grs columns;
// then, for s = 0..w-1, columns n-w+2s and n-w+2s+1 hold the mixed pair built
// from grs column n-w+s and random column s.
inline Matrix assemble_public_matrix(const RlceSecretKey& sk) {
    const RlceParams& p = sk.params;
    const Gf& f = *sk.field;
    const Matrix g0 = grs_generator(sk.grs);
    Matrix g(sk.field, p.k, p.code_length());
    for (std::size_t j = 0; j + p.w < p.n; ++j) {
        const std::uint32_t pub = sk.perm[j];
        for (std::size_t r = 0; r < p.k; ++r) g.at(r, pub) = g0.at(r, j);
    }
    for (std::size_t s = 0; s < p.w; ++s) {
        const std::size_t gcol = p.n - p.w + s;
        const TwinMixer& mx = sk.mixers[s];
        const std::uint32_t pub_i = sk.perm[p.n - p.w + 2 * s];
        const std::uint32_t pub_t = sk.perm[p.n - p.w + 2 * s + 1];
        for (std::size_t r = 0; r < p.k; ++r) {
            const gf_elem gv = g0.at(r, gcol);
            const gf_elem rv = sk.random_cols.at(r, s);
            g.at(r, pub_i) = Gf::add(f.mul(mx.a, gv), f.mul(mx.c, rv));
            g.at(r, pub_t) = Gf::add(f.mul(mx.b, gv), f.mul(mx.d, rv));
        }
    }
    return g;
}

// Deterministic key generation: the master seed splits into independent
// streams for the support, multiplier, random columns, mixers and the
// permutation, so a test can pin any one component.
inline RlceKeyPair keygen(const RlceParams& params, const Seed& seed,
                          const KeygenOptions& opts = {}) {
    params.validate();
    GfPtr field = params.make_context();
    const Gf& f = *field;

    RlceSecretKey sk;
    sk.params = params;
    sk.params.reduction_poly = field->modulus(); // keys record the actual polynomial
    sk.field = field;
    sk.seed = seed;

    {
        Rng rx(seed, "x");
        auto vals = rx.sample_distinct(params.n, f.order());
        sk.grs.support.assign(vals.begin(), vals.end());
    }
    {
        Rng ry(seed, "y");
        sk.grs.multiplier.resize(params.n);
        for (auto& y : sk.grs.multiplier) y = ry.nonzero_element(f);
    }
    sk.grs.field = field;
    sk.grs.dim = params.k;
    sk.grs.validate();

    {
        Rng rr(seed, "r");
        sk.random_cols = Matrix(field, params.k, params.w);
        for (std::size_t r = 0; r < params.k; ++r)
            for (std::size_t s = 0; s < params.w; ++s) sk.random_cols.at(r, s) = rr.element(f);
    }
    {
        Rng ra(seed, "A");
        sk.mixers.resize(params.w);
        for (std::size_t s = 0; s < params.w; ++s)
            sk.mixers[s] = detail::sample_mixer(ra, f, opts.force_nondegenerate);
        for (const auto& [s, entry] : opts.forced_zero) {
            if (s >= params.w) throw InvalidParams("forced-degenerate pair index out of range");
            sk.mixers[s] = detail::sample_degenerate_mixer(ra, f, entry);
        }
    }
    {
        Rng rp(seed, "pi");
        sk.perm = rp.permutation(static_cast<std::uint32_t>(params.code_length()));
    }

    RlcePublicKey pk{sk.params, field, assemble_public_matrix(sk)};
    return {std::move(pk), std::move(sk)};
}

// c = m G + e with wt(e) = weight, error drawn from the seed
inline std::vector<gf_elem> encrypt_with_weight(const RlcePublicKey& pk,
                                                std::span<const gf_elem> msg, const Seed& seed,
                                                std::size_t weight) {
    if (msg.size() != pk.params.k) throw LengthMismatch("message must have k symbols");
    std::vector<gf_elem> c = pk.g.left_mul_vector(msg);
    Rng re(seed, "e");
    const auto supp = re.sample_distinct(weight, static_cast<std::uint32_t>(pk.params.code_length()));
    for (std::uint32_t pos : supp) c[pos] ^= re.nonzero_element(*pk.field);
    return c;
}

inline std::vector<gf_elem> encrypt(const RlcePublicKey& pk, std::span<const gf_elem> msg,
                                    const Seed& seed) {
    return encrypt_with_weight(pk, msg, seed, pk.params.t);
}

// Legitimate decryption: undo the permutation, unmix each pair with the
// inverse 2x2 matrix, decode the n grs coordinates, and read the message off
// the interpolated polynomial.
inline std::optional<std::vector<gf_elem>> decrypt(const RlceSecretKey& sk,
                                                   std::span<const gf_elem> ct) {
    const RlceParams& p = sk.params;
    if (ct.size() != p.code_length()) throw LengthMismatch("ciphertext has wrong length");
    const Gf& f = *sk.field;

    std::vector<gf_elem> grs_word(p.n);
    for (std::size_t j = 0; j + p.w < p.n; ++j) grs_word[j] = ct[sk.perm[j]];
    for (std::size_t s = 0; s < p.w; ++s) {
        const gf_elem u = ct[sk.perm[p.n - p.w + 2 * s]];
        const gf_elem v = ct[sk.perm[p.n - p.w + 2 * s + 1]];
        const TwinMixer& mx = sk.mixers[s];
        const gf_elem det_inv = f.inv(mx.det(f));
        // (grs, rand) = (u, v) * A^{-1}; only the grs part is needed
        grs_word[p.n - p.w + s] = f.mul(det_inv, Gf::add(f.mul(u, mx.d), f.mul(v, mx.c)));
    }

    auto dec = grs_decode(sk.grs, grs_word, p.t);
    if (!dec) return std::nullopt;
    std::vector<gf_elem> msg(p.k, 0);
    for (std::size_t i = 0; i < p.k; ++i) msg[i] = dec->message.coeff(i);
    return msg;
}

// Message recovery that works for any equivalent key, not just the one that
// produced the public matrix: decode the grs word with the secret key, then
// solve for the message against the sender's generator. The unmixed-grs view
// of pk.g has the k x n full-rank shape needed for a unique solution.
inline std::optional<std::vector<gf_elem>> decrypt_with_public(const RlcePublicKey& pk,
                                                               const RlceSecretKey& sk,
                                                               std::span<const gf_elem> ct) {
    const RlceParams& p = sk.params;
    if (ct.size() != p.code_length()) throw LengthMismatch("ciphertext has wrong length");
    const Gf& f = *sk.field;

    std::vector<gf_elem> grs_word(p.n);
    for (std::size_t j = 0; j + p.w < p.n; ++j) grs_word[j] = ct[sk.perm[j]];
    for (std::size_t s = 0; s < p.w; ++s) {
        const gf_elem u = ct[sk.perm[p.n - p.w + 2 * s]];
        const gf_elem v = ct[sk.perm[p.n - p.w + 2 * s + 1]];
        const TwinMixer& mx = sk.mixers[s];
        const gf_elem det_inv = f.inv(mx.det(f));
        grs_word[p.n - p.w + s] = f.mul(det_inv, Gf::add(f.mul(u, mx.d), f.mul(v, mx.c)));
    }
    const auto dec = grs_decode(sk.grs, grs_word, p.t);
    if (!dec) return std::nullopt;
    const auto clean = grs_encode(sk.grs, dec->message);

    // columns of pk.g in unmixed-grs coordinates, laid out like grs_word
    Matrix m(sk.field, p.k, p.n);
    for (std::size_t j = 0; j + p.w < p.n; ++j)
        for (std::size_t r = 0; r < p.k; ++r) m.at(r, j) = pk.g.at(r, sk.perm[j]);
    for (std::size_t s = 0; s < p.w; ++s) {
        const TwinMixer& mx = sk.mixers[s];
        const gf_elem det_inv = f.inv(mx.det(f));
        const std::uint32_t pi = sk.perm[p.n - p.w + 2 * s];
        const std::uint32_t pt = sk.perm[p.n - p.w + 2 * s + 1];
        for (std::size_t r = 0; r < p.k; ++r)
            m.at(r, p.n - p.w + s) = f.mul(
                det_inv, Gf::add(f.mul(pk.g.at(r, pi), mx.d), f.mul(pk.g.at(r, pt), mx.c)));
    }
    return solve(m.transpose(), clean);
}

enum class PosKind { Grs1, Grs2, Random, PseudoRandom };

// Ground-truth partition of the public positions, derived from the secret
// key: first-kind grs positions, second-kind grs positions (mixer c or d
// zero), pure random positions, and pseudo-random twin pairs. twin[] is the
// involution tau on all positions that belong to a pair, -1 elsewhere;
// grs_index[] is the underlying support index.
struct PositionClassification {
    std::vector<PosKind> kind;
    std::vector<std::int32_t> twin;
    std::vector<std::int32_t> grs_index;

    std::vector<std::uint32_t> of_kind(PosKind k) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < kind.size(); ++i)
            if (kind[i] == k) out.push_back(i);
        return out;
    }
    std::vector<std::uint32_t> grs1() const { return of_kind(PosKind::Grs1); }
    std::vector<std::uint32_t> grs2() const { return of_kind(PosKind::Grs2); }
    std::vector<std::uint32_t> random() const { return of_kind(PosKind::Random); }
    std::vector<std::uint32_t> pseudo_random() const { return of_kind(PosKind::PseudoRandom); }

    std::vector<std::uint32_t> grs_positions() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < kind.size(); ++i)
            if (kind[i] == PosKind::Grs1 || kind[i] == PosKind::Grs2) out.push_back(i);
        return out;
    }
    std::vector<std::uint32_t> twin_positions() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < kind.size(); ++i)
            if (twin[i] >= 0) out.push_back(i);
        return out;
    }
};

inline PositionClassification classify_positions(const RlceSecretKey& sk) {
    const RlceParams& p = sk.params;
    PositionClassification out;
    out.kind.resize(p.code_length());
    out.twin.assign(p.code_length(), -1);
    out.grs_index.assign(p.code_length(), -1);

    for (std::size_t j = 0; j + p.w < p.n; ++j) {
        out.kind[sk.perm[j]] = PosKind::Grs1;
        out.grs_index[sk.perm[j]] = static_cast<std::int32_t>(j);
    }
    for (std::size_t s = 0; s < p.w; ++s) {
        const std::uint32_t i = sk.perm[p.n - p.w + 2 * s];
        const std::uint32_t ti = sk.perm[p.n - p.w + 2 * s + 1];
        const TwinMixer& mx = sk.mixers[s];
        out.twin[i] = static_cast<std::int32_t>(ti);
        out.twin[ti] = static_cast<std::int32_t>(i);
        out.grs_index[i] = out.grs_index[ti] = static_cast<std::int32_t>(p.n - p.w + s);
        if (mx.c == 0) {
            out.kind[i] = PosKind::Grs2;
            out.kind[ti] = PosKind::Random;
        } else if (mx.d == 0) {
            out.kind[i] = PosKind::Random;
            out.kind[ti] = PosKind::Grs2;
        } else {
            out.kind[i] = out.kind[ti] = PosKind::PseudoRandom;
        }
    }
    return out;
}

} // namespace rlce

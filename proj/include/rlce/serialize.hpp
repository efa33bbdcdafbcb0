#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "rlce/rlce.hpp"

namespace rlce {

// Versioned JSON documents. Field elements serialize as integers in
// [0, 2^m), the reduction polynomial as a hex string (bit i = coefficient of
// x^i), seeds as hex strings. Secret and public keys live in separate files.

inline constexpr int kFileVersion = 1;

namespace detail {

inline nlohmann::json params_to_json(const RlceParams& p, std::uint32_t actual_poly) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%x", actual_poly);
    return {{"m", p.m}, {"reduction_poly", buf}, {"n", p.n}, {"k", p.k}, {"w", p.w}, {"t", p.t}};
}

inline RlceParams params_from_json(const nlohmann::json& j) {
    RlceParams p;
    p.m = j.at("m").get<int>();
    const std::string poly = j.at("reduction_poly").get<std::string>();
    p.reduction_poly = static_cast<std::uint32_t>(std::stoul(poly, nullptr, 16));
    p.n = j.at("n").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.w = j.at("w").get<std::size_t>();
    p.t = j.at("t").get<std::size_t>();
    p.validate();
    return p;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, GfPtr field, std::size_t rows,
                               std::size_t cols) {
    if (!j.is_array() || j.size() != rows) throw FileFormatError("bad matrix row count");
    Matrix m(std::move(field), rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != cols) throw FileFormatError("bad matrix column count");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto v = row[c].get<std::uint32_t>();
            if (v >= m.field()->order()) throw FileFormatError("field element out of range");
            m.at(r, c) = static_cast<gf_elem>(v);
        }
    }
    return m;
}

inline std::vector<gf_elem> elems_from_json(const nlohmann::json& j, const Gf& f,
                                            std::size_t expected) {
    if (!j.is_array() || j.size() != expected) throw FileFormatError("bad element array length");
    std::vector<gf_elem> out(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        const auto v = j[i].get<std::uint32_t>();
        if (v >= f.order()) throw FileFormatError("field element out of range");
        out[i] = static_cast<gf_elem>(v);
    }
    return out;
}

inline nlohmann::json load_document(const std::string& path, std::string_view kind) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FileFormatError(path + ": " + e.what());
    }
    if (j.value("version", -1) != kFileVersion) throw FileFormatError(path + ": unsupported version");
    if (j.value("kind", "") != kind)
        throw FileFormatError(path + ": expected kind '" + std::string(kind) + "'");
    return j;
}

inline void write_document(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw FileFormatError("cannot write " + path);
    out << j.dump() << '\n';
}

} // namespace detail

inline void save_public_key(const std::string& path, const RlcePublicKey& pk) {
    nlohmann::json j = {{"version", kFileVersion},
                        {"kind", "rlce-public-key"},
                        {"params", detail::params_to_json(pk.params, pk.field->modulus())},
                        {"g", detail::matrix_to_json(pk.g)}};
    detail::write_document(path, j);
}

inline RlcePublicKey load_public_key(const std::string& path) {
    const auto j = detail::load_document(path, "rlce-public-key");
    RlcePublicKey pk;
    pk.params = detail::params_from_json(j.at("params"));
    pk.field = pk.params.make_context();
    pk.g = detail::matrix_from_json(j.at("g"), pk.field, pk.params.k, pk.params.code_length());
    return pk;
}

inline void save_secret_key(const std::string& path, const RlceSecretKey& sk) {
    nlohmann::json mixers = nlohmann::json::array();
    for (const auto& mx : sk.mixers) mixers.push_back({mx.a, mx.b, mx.c, mx.d});
    nlohmann::json rand_cols = nlohmann::json::array();
    for (std::size_t s = 0; s < sk.params.w; ++s) {
        nlohmann::json col = nlohmann::json::array();
        for (std::size_t r = 0; r < sk.params.k; ++r) col.push_back(sk.random_cols.at(r, s));
        rand_cols.push_back(std::move(col));
    }
    nlohmann::json j = {{"version", kFileVersion},
                        {"kind", "rlce-secret-key"},
                        {"params", detail::params_to_json(sk.params, sk.field->modulus())},
                        {"x", sk.grs.support},
                        {"y", sk.grs.multiplier},
                        {"mixers", mixers},
                        {"permutation", sk.perm},
                        {"random_columns", rand_cols},
                        {"seed", seed_to_hex(sk.seed)}};
    detail::write_document(path, j);
}

inline RlceSecretKey load_secret_key(const std::string& path) {
    const auto j = detail::load_document(path, "rlce-secret-key");
    RlceSecretKey sk;
    sk.params = detail::params_from_json(j.at("params"));
    sk.field = sk.params.make_context();
    const Gf& f = *sk.field;
    sk.grs.field = sk.field;
    sk.grs.dim = sk.params.k;
    sk.grs.support = detail::elems_from_json(j.at("x"), f, sk.params.n);
    sk.grs.multiplier = detail::elems_from_json(j.at("y"), f, sk.params.n);
    sk.grs.validate();

    const auto& mixers = j.at("mixers");
    if (!mixers.is_array() || mixers.size() != sk.params.w)
        throw FileFormatError("bad mixer count");
    sk.mixers.resize(sk.params.w);
    for (std::size_t s = 0; s < sk.params.w; ++s) {
        const auto mx = detail::elems_from_json(mixers[s], f, 4);
        sk.mixers[s] = {mx[0], mx[1], mx[2], mx[3]};
        if (sk.mixers[s].det(f) == 0) throw FileFormatError("singular mixer in key file");
    }

    const auto& perm = j.at("permutation");
    if (!perm.is_array() || perm.size() != sk.params.code_length())
        throw FileFormatError("bad permutation length");
    sk.perm.resize(sk.params.code_length());
    std::vector<bool> hit(sk.params.code_length(), false);
    for (std::size_t i = 0; i < sk.perm.size(); ++i) {
        const auto v = perm[i].get<std::uint32_t>();
        if (v >= sk.params.code_length() || hit[v]) throw FileFormatError("permutation is not a bijection");
        hit[v] = true;
        sk.perm[i] = v;
    }

    const auto& rc = j.at("random_columns");
    if (!rc.is_array() || rc.size() != sk.params.w) throw FileFormatError("bad random column count");
    sk.random_cols = Matrix(sk.field, sk.params.k, sk.params.w);
    for (std::size_t s = 0; s < sk.params.w; ++s) {
        const auto col = detail::elems_from_json(rc[s], f, sk.params.k);
        for (std::size_t r = 0; r < sk.params.k; ++r) sk.random_cols.at(r, s) = col[r];
    }

    sk.seed = j.contains("seed") && !j.at("seed").get<std::string>().empty()
                  ? seed_from_hex(j.at("seed").get<std::string>())
                  : Seed{};
    return sk;
}

inline void save_symbols(const std::string& path, std::string_view kind,
                         std::span<const gf_elem> symbols, const RlceParams& p,
                         std::uint32_t poly) {
    nlohmann::json j = {{"version", kFileVersion},
                        {"kind", kind},
                        {"params", detail::params_to_json(p, poly)},
                        {"symbols", std::vector<std::uint32_t>(symbols.begin(), symbols.end())}};
    detail::write_document(path, j);
}

inline std::vector<gf_elem> load_symbols(const std::string& path, std::string_view kind,
                                         const Gf& f, std::size_t expected) {
    const auto j = detail::load_document(path, kind);
    return detail::elems_from_json(j.at("symbols"), f, expected);
}

} // namespace rlce

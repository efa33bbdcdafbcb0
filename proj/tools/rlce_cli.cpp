// Command-line front end: keygen, encrypt, decrypt, distinguish, attack,
// verify, params. Exit codes: 0 success, 2 not distinguishable, 3 attack or
// verification failure, anything else 1.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlce/attack.hpp"
#include "rlce/distinguisher.hpp"
#include "rlce/rlce.hpp"
#include "rlce/serialize.hpp"

using namespace rlce;

namespace {

constexpr int kExitNotDistinguishable = 2;
constexpr int kExitAttackFailed = 3;

struct ParamArgs {
    std::string preset;
    RlceParams explicit_params{};
    bool has_explicit = false;

    RlceParams resolve() const {
        if (!preset.empty()) return preset_params(preset);
        if (!has_explicit) throw InvalidParams("specify --preset or --n/--k/--w/--t/--m");
        RlceParams p = explicit_params;
        if (p.t == 0) p.t = (p.n - p.k) / 2;
        p.validate();
        return p;
    }
};

void add_param_options(CLI::App* cmd, ParamArgs& pa) {
    cmd->add_option("--preset", pa.preset, "parameter preset id0..id5");
    auto* n = cmd->add_option("--n", pa.explicit_params.n, "code length before random columns");
    cmd->add_option("--k", pa.explicit_params.k, "dimension");
    cmd->add_option("--w", pa.explicit_params.w, "number of random columns");
    cmd->add_option("--t", pa.explicit_params.t, "error weight (default (n-k)/2)");
    cmd->add_option("--m", pa.explicit_params.m, "field degree, q = 2^m")->default_val(10);
    n->each([&pa](const std::string&) { pa.has_explicit = true; });
}

std::string interval_string(const RlceParams& p) {
    const auto iv = distinguisher_interval(p);
    if (!iv) return "not distinguishable";
    return std::to_string(iv->ell_min) + " " + std::to_string(iv->ell_max);
}

int cmd_params(const ParamArgs& pa, const std::string& format) {
    const RlceParams p = pa.resolve();
    const auto iv = distinguisher_interval(p);
    if (format == "json") {
        nlohmann::json j = {{"n", p.n}, {"k", p.k}, {"w", p.w}, {"t", p.t}, {"m", p.m},
                            {"distinguishable", iv.has_value()}};
        if (iv) {
            j["ell_min"] = iv->ell_min;
            j["ell_max"] = iv->ell_max;
        }
        std::cout << j.dump() << '\n';
    } else if (format == "csv") {
        std::cout << "n,k,w,t,m,ell_min,ell_max\n"
                  << p.n << ',' << p.k << ',' << p.w << ',' << p.t << ',' << p.m << ',';
        if (iv)
            std::cout << iv->ell_min << ',' << iv->ell_max << '\n';
        else
            std::cout << ",\n";
    } else {
        std::cout << interval_string(p) << '\n';
    }
    return 0;
}

int cmd_keygen(const ParamArgs& pa, const std::string& seed_hex, const std::string& pub_path,
               const std::string& sec_path, bool allow_degenerate,
               const std::vector<std::string>& forced) {
    const RlceParams p = pa.resolve();
    KeygenOptions opts;
    opts.force_nondegenerate = !allow_degenerate && forced.empty();
    for (const std::string& entry_spec : forced) {
        const auto colon = entry_spec.find(':');
        if (colon == std::string::npos || colon + 2 != entry_spec.size() ||
            (entry_spec[colon + 1] != 'c' && entry_spec[colon + 1] != 'd'))
            throw InvalidParams("--degenerate expects <pair-index>:c or <pair-index>:d");
        opts.forced_zero.emplace_back(std::stoul(entry_spec.substr(0, colon)), entry_spec[colon + 1]);
    }
    const auto kp = keygen(p, seed_from_hex(seed_hex), opts);
    save_public_key(pub_path, kp.pub);
    save_secret_key(sec_path, kp.sec);
    std::cout << "n=" << p.n << " k=" << p.k << " w=" << p.w << " t=" << p.t << " q=2^" << p.m
              << '\n'
              << "public key: " << kp.pub.g.rows() << "x" << kp.pub.g.cols() << " -> " << pub_path
              << '\n'
              << "secret key: " << sec_path << '\n'
              << "distinguisher interval: " << interval_string(p) << '\n';
    return 0;
}

int cmd_encrypt(const std::string& pub_path, const std::string& msg_path,
                const std::string& out_path, const std::string& seed_hex, bool random_msg,
                const std::string& msg_out, int weight_override) {
    const auto pk = load_public_key(pub_path);
    std::vector<gf_elem> msg;
    if (random_msg) {
        Rng rng(seed_from_hex(seed_hex), "msg");
        msg.resize(pk.params.k);
        for (auto& m : msg) m = rng.element(*pk.field);
        if (!msg_out.empty())
            save_symbols(msg_out, "rlce-message", msg, pk.params, pk.field->modulus());
    } else {
        msg = load_symbols(msg_path, "rlce-message", *pk.field, pk.params.k);
    }
    const std::size_t weight = weight_override >= 0 ? static_cast<std::size_t>(weight_override)
                                                    : pk.params.t;
    const auto ct = encrypt_with_weight(pk, msg, seed_from_hex(seed_hex), weight);
    save_symbols(out_path, "rlce-ciphertext", ct, pk.params, pk.field->modulus());
    std::cout << "ciphertext (" << ct.size() << " symbols, " << weight << " errors) -> "
              << out_path << '\n';
    return 0;
}

int cmd_decrypt(const std::string& sec_path, const std::string& ct_path,
                const std::string& out_path) {
    const auto sk = load_secret_key(sec_path);
    const auto ct = load_symbols(ct_path, "rlce-ciphertext", *sk.field, sk.params.code_length());
    const auto msg = decrypt(sk, ct);
    if (!msg) {
        std::cerr << "decryption failed: no codeword within distance t\n";
        return 1;
    }
    save_symbols(out_path, "rlce-message", *msg, sk.params, sk.field->modulus());
    std::cout << "message -> " << out_path << '\n';
    return 0;
}

int cmd_distinguish(const std::string& pub_path, std::size_t trials, const std::string& seed_hex,
                    unsigned threads, const std::string& format) {
    const auto pk = load_public_key(pub_path);
    const auto verdict =
        is_rlce_like(pk.code(), pk.params, trials, seed_from_hex(seed_hex), threads);
    if (format == "csv") {
        std::cout << "trial,ell,observed_dim,bound,baseline,distinguished\n";
        for (std::size_t i = 0; i < verdict.evidence.size(); ++i) {
            const auto& r = verdict.evidence[i];
            std::cout << i << ',' << r.shortening_set.size() << ',' << r.observed_dim << ','
                      << r.bound << ',' << r.baseline << ',' << (r.distinguished ? 1 : 0) << '\n';
        }
    } else if (format == "json") {
        nlohmann::json evidence = nlohmann::json::array();
        for (const auto& r : verdict.evidence)
            evidence.push_back({{"ell", r.shortening_set.size()},
                                {"observed_dim", r.observed_dim},
                                {"bound", r.bound},
                                {"baseline", r.baseline},
                                {"distinguished", r.distinguished}});
        std::cout << nlohmann::json{{"rlce_like", verdict.rlce_like},
                                    {"positive_trials", verdict.positive_trials},
                                    {"evidence", evidence}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "|L|  observed  bound  baseline  verdict\n";
        for (const auto& r : verdict.evidence)
            std::cout << r.shortening_set.size() << "  " << r.observed_dim << "  " << r.bound
                      << "  " << r.baseline << "  "
                      << (r.distinguished ? "distinguished" : "generic") << '\n';
        std::cout << "verdict: " << (verdict.rlce_like ? "rlce-like" : "random") << " ("
                  << verdict.positive_trials << "/" << trials << " trials)\n";
    }
    return 0;
}

int cmd_attack(const std::string& pub_path, const std::string& seed_hex,
               const std::string& out_path, const std::string& trace_path, std::size_t budget) {
    const auto pk = load_public_key(pub_path);
    AttackOptions opts;
    opts.budget = budget;
    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path);
        if (!trace) throw FileFormatError("cannot write " + trace_path);
        opts.trace = [&trace](const std::string& line) { trace << line << '\n'; };
    }
    const auto recovered = full_attack(pk, seed_from_hex(seed_hex), opts);
    save_secret_key(out_path, recovered.key);
    std::cout << "pairs: " << recovered.pairing.pairs.size() << '\n'
              << "recovered key -> " << out_path << '\n'
              << "timings: twins " << recovered.timings.twins_s << "s, ss "
              << recovered.timings.ss_s << "s, mixers " << recovered.timings.mixers_s
              << "s, total " << recovered.timings.total_s << "s\n";
    return 0;
}

int cmd_verify(const std::string& pub_path, const std::string& sec_path, std::size_t trials,
               const std::string& seed_hex) {
    const auto pk = load_public_key(pub_path);
    const auto sk = load_secret_key(sec_path);
    const auto rep = verify_equivalence(pk, sk, trials, seed_from_hex(seed_hex));
    std::cout << "row space equal: " << (rep.row_space_equal ? "yes" : "no") << '\n'
              << "decryptions: " << rep.decrypt_successes << "/" << rep.trials << '\n'
              << (rep.passed() ? "PASS" : "FAIL") << '\n';
    return rep.passed() ? 0 : kExitAttackFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RLCE encryption scheme and square-code key-recovery attack"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format: text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    ParamArgs params_args, keygen_args;
    std::string seed_hex = "00";
    std::string pub_path, sec_path, msg_path, ct_path, out_path, trace_path, msg_out;
    bool allow_degenerate = false, random_msg = false;
    std::vector<std::string> forced_degenerate;
    std::size_t trials = 10, verify_trials = 100, budget = 16;
    unsigned threads = 1;
    int weight_override = -1;

    auto* c_params = app.add_subcommand("params", "print the distinguisher interval");
    add_param_options(c_params, params_args);

    auto* c_keygen = app.add_subcommand("keygen", "generate a key pair");
    add_param_options(c_keygen, keygen_args);
    c_keygen->add_option("--seed", seed_hex, "master seed (hex)");
    c_keygen->add_option("--pub", pub_path, "public key output path")->required();
    c_keygen->add_option("--sec", sec_path, "secret key output path")->required();
    c_keygen->add_flag("--allow-degenerate", allow_degenerate,
                       "do not resample mixers with c*d = 0");
    c_keygen->add_option("--degenerate", forced_degenerate,
                         "force mixer entry to zero, e.g. 0:c or 3:d (repeatable)");

    auto* c_encrypt = app.add_subcommand("encrypt", "encrypt a message file");
    c_encrypt->add_option("--pub", pub_path, "public key path")->required();
    c_encrypt->add_option("--msg", msg_path, "message file (k symbols)");
    c_encrypt->add_option("--out", out_path, "ciphertext output path")->required();
    c_encrypt->add_option("--seed", seed_hex, "error vector seed (hex)");
    c_encrypt->add_flag("--random-msg", random_msg, "draw a random message instead of --msg");
    c_encrypt->add_option("--msg-out", msg_out, "where to store the random message");
    c_encrypt->add_option("--weight", weight_override, "override error weight (testing hook)");

    auto* c_decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext file");
    c_decrypt->add_option("--sec", sec_path, "secret key path")->required();
    c_decrypt->add_option("--ct", ct_path, "ciphertext path")->required();
    c_decrypt->add_option("--out", out_path, "message output path")->required();

    auto* c_dist = app.add_subcommand("distinguish", "square-code distinguisher report");
    c_dist->add_option("--pub", pub_path, "public key path")->required();
    c_dist->add_option("--trials", trials, "number of shortening sets");
    c_dist->add_option("--seed", seed_hex, "sampling seed (hex)");
    c_dist->add_option("--threads", threads, "parallel workers");

    auto* c_attack = app.add_subcommand("attack", "recover an equivalent secret key");
    c_attack->add_option("--pub", pub_path, "public key path")->required();
    c_attack->add_option("--seed", seed_hex, "attack seed (hex)");
    c_attack->add_option("--out", out_path, "recovered key output path")->required();
    c_attack->add_option("--trace", trace_path, "JSONL trace output path");
    c_attack->add_option("--budget", budget, "max shortening sets while collecting pairs");

    auto* c_verify = app.add_subcommand("verify", "check a recovered key against a public key");
    c_verify->add_option("--pub", pub_path, "public key path")->required();
    c_verify->add_option("--sec", sec_path, "secret (or recovered) key path")->required();
    c_verify->add_option("--trials", verify_trials, "encrypt/decrypt round trips");
    c_verify->add_option("--seed", seed_hex, "trial seed (hex)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_params->parsed()) return cmd_params(params_args, format);
        if (c_keygen->parsed())
            return cmd_keygen(keygen_args, seed_hex, pub_path, sec_path, allow_degenerate,
                              forced_degenerate);
        if (c_encrypt->parsed())
            return cmd_encrypt(pub_path, msg_path, out_path, seed_hex, random_msg, msg_out,
                               weight_override);
        if (c_decrypt->parsed()) return cmd_decrypt(sec_path, ct_path, out_path);
        if (c_dist->parsed()) return cmd_distinguish(pub_path, trials, seed_hex, threads, format);
        if (c_attack->parsed()) return cmd_attack(pub_path, seed_hex, out_path, trace_path, budget);
        if (c_verify->parsed()) return cmd_verify(pub_path, sec_path, verify_trials, seed_hex);
    } catch (const NotDistinguishable& e) {
        std::cerr << "not distinguishable: " << e.what() << '\n';
        return kExitNotDistinguishable;
    } catch (const BudgetExceeded& e) {
        std::cerr << "attack failed: " << e.what() << '\n';
        return kExitAttackFailed;
    } catch (const RepairFailed& e) {
        std::cerr << "attack failed: " << e.what() << '\n';
        return kExitAttackFailed;
    } catch (const InconsistentPair& e) {
        std::cerr << "attack failed: " << e.what() << '\n';
        return kExitAttackFailed;
    } catch (const NotGrs& e) {
        std::cerr << "attack failed: " << e.what() << '\n';
        return kExitAttackFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

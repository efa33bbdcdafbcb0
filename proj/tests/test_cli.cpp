#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "rlce/serialize.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = RLCE_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const auto out_path = fs::temp_directory_path() / "rlce_cli_out.txt";
    const std::string cmd = kCli + " " + args + " > " + out_path.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("rlce_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kDeskArgs = "--n 60 --k 30 --w 12 --t 15 --m 10";

} // namespace

TEST_CASE("params reproduces the published intervals") {
    CHECK(run("params --preset id1").out == "316 354\n");
    CHECK(run("params --preset id3").out == "534 592\n");
    CHECK(run("params --preset id5").out == "551 663\n");
    CHECK(run("params --preset id0").out == "not distinguishable\n");
    CHECK(run("params " + kDeskArgs).out == "12 21\n");

    const auto js = run("--format json params --preset id1");
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["ell_min"] == 316);
    CHECK(j["ell_max"] == 354);

    CHECK(run("params").exit_code != 0);
    CHECK(run("params --preset id9").exit_code != 0);
}

TEST_CASE("keygen writes deterministic key files") {
    TempDir dir;
    const auto r1 = run("keygen " + kDeskArgs + " --seed 0a0b --pub " + dir / "a.pub" +
                        " --sec " + dir / "a.sec");
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("distinguisher interval: 12 21") != std::string::npos);

    const auto r2 = run("keygen " + kDeskArgs + " --seed 0a0b --pub " + dir / "b.pub" +
                        " --sec " + dir / "b.sec");
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir / "a.pub") == slurp(dir / "b.pub"));
    CHECK(slurp(dir / "a.sec") == slurp(dir / "b.sec"));

    const auto r3 = run("keygen " + kDeskArgs + " --seed 0a0c --pub " + dir / "c.pub" +
                        " --sec " + dir / "c.sec");
    CHECK(slurp(dir / "a.pub") != slurp(dir / "c.pub"));

    const auto pk = rlce::load_public_key(dir / "a.pub");
    CHECK(pk.g.rows() == 30);
    CHECK(pk.g.cols() == 72);
}

TEST_CASE("keygen on preset id1 emits a 376x628 public key") {
    TempDir dir;
    const auto r = run("keygen --preset id1 --seed 00 --pub " + dir / "id1.pub" + " --sec " +
                       dir / "id1.sec");
    CHECK(r.exit_code == 0);
    const auto pk = rlce::load_public_key(dir / "id1.pub");
    CHECK(pk.g.rows() == 376);
    CHECK(pk.g.cols() == 628);
}

TEST_CASE("keygen on an even preset reports an empty interval") {
    TempDir dir;
    const auto r = run("keygen --preset id0 --seed 00 --pub " + dir / "id0.pub" + " --sec " +
                       dir / "id0.sec");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("distinguisher interval: not distinguishable") != std::string::npos);
}

TEST_CASE("encrypt and decrypt round trip through files") {
    TempDir dir;
    REQUIRE(run("keygen " + kDeskArgs + " --seed 01 --pub " + dir / "k.pub" + " --sec " +
                dir / "k.sec")
                .exit_code == 0);
    const auto enc = run("encrypt --pub " + dir / "k.pub" + " --random-msg --msg-out " +
                         dir / "m.json" + " --out " + dir / "c.json" + " --seed 02");
    CHECK(enc.exit_code == 0);
    const auto dec = run("decrypt --sec " + dir / "k.sec" + " --ct " + dir / "c.json" +
                         " --out " + dir / "m2.json");
    CHECK(dec.exit_code == 0);

    const auto m1 = nlohmann::json::parse(slurp(dir / "m.json"));
    const auto m2 = nlohmann::json::parse(slurp(dir / "m2.json"));
    CHECK(m1["symbols"] == m2["symbols"]);

    // zero-weight hook gives c = mG, still decryptable
    const auto enc0 = run("encrypt --pub " + dir / "k.pub" + " --msg " + dir / "m.json" +
                          " --out " + dir / "c0.json" + " --seed 03 --weight 0");
    CHECK(enc0.exit_code == 0);
    CHECK(run("decrypt --sec " + dir / "k.sec" + " --ct " + dir / "c0.json" + " --out " +
              dir / "m3.json")
              .exit_code == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "m3.json"))["symbols"] == m1["symbols"]);
}

TEST_CASE("distinguish reports rlce-like keys and exit code 2 on even presets") {
    TempDir dir;
    REQUIRE(run("keygen " + kDeskArgs + " --seed 04 --pub " + dir / "k.pub" + " --sec " +
                dir / "k.sec")
                .exit_code == 0);
    const auto r = run("distinguish --pub " + dir / "k.pub" + " --trials 5 --seed 05");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("verdict: rlce-like (5/5 trials)") != std::string::npos);

    const auto csv = run("--format csv distinguish --pub " + dir / "k.pub" +
                         " --trials 3 --seed 05 --threads 2");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("trial,ell,observed_dim,bound,baseline,distinguished\n", 0) == 0);

    REQUIRE(run("keygen --n 40 --k 20 --w 20 --t 10 --m 10 --seed 06 --pub " + dir / "even.pub" +
                " --sec " + dir / "even.sec")
                .exit_code == 0);
    CHECK(run("distinguish --pub " + dir / "even.pub" + " --trials 3 --seed 07").exit_code == 2);
}

TEST_CASE("attack, trace and verify") {
    TempDir dir;
    REQUIRE(run("keygen " + kDeskArgs + " --seed 08 --pub " + dir / "k.pub" + " --sec " +
                dir / "k.sec")
                .exit_code == 0);
    const auto atk = run("attack --pub " + dir / "k.pub" + " --seed 09 --out " + dir / "rec.sec" +
                         " --trace " + dir / "trace.jsonl");
    CHECK(atk.exit_code == 0);

    // every trace line parses as a JSON object with an event tag
    std::ifstream trace(dir / "trace.jsonl");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(trace, line)) {
        ++lines;
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("event"));
    }
    CHECK(lines >= rlce::RlceParams{10, 0, 60, 30, 12, 15}.w + 2);

    CHECK(run("verify --pub " + dir / "k.pub" + " --sec " + dir / "rec.sec" +
              " --trials 50 --seed 0a")
              .exit_code == 0);

    // the genuine key also verifies
    CHECK(run("verify --pub " + dir / "k.pub" + " --sec " + dir / "k.sec" +
              " --trials 10 --seed 0b")
              .exit_code == 0);

    // a key for different parameters fails verification with exit 3
    REQUIRE(run("keygen " + kDeskArgs + " --seed 0c --pub " + dir / "other.pub" + " --sec " +
                dir / "other.sec")
                .exit_code == 0);
    CHECK(run("verify --pub " + dir / "k.pub" + " --sec " + dir / "other.sec" +
              " --trials 10 --seed 0d")
              .exit_code == 3);
}

TEST_CASE("attack output files are deterministic") {
    TempDir dir;
    REQUIRE(run("keygen " + kDeskArgs + " --seed 10 --pub " + dir / "k.pub" + " --sec " +
                dir / "k.sec")
                .exit_code == 0);
    REQUIRE(run("attack --pub " + dir / "k.pub" + " --seed 21 --out " + dir / "r1.sec")
                .exit_code == 0);
    REQUIRE(run("attack --pub " + dir / "k.pub" + " --seed 21 --out " + dir / "r2.sec")
                .exit_code == 0);
    CHECK(slurp(dir / "r1.sec") == slurp(dir / "r2.sec"));
}

TEST_CASE("attack refuses even-id parameters with exit code 2") {
    TempDir dir;
    REQUIRE(run("keygen --n 40 --k 20 --w 20 --t 10 --m 10 --seed 0e --pub " + dir / "even.pub" +
                " --sec " + dir / "even.sec")
                .exit_code == 0);
    CHECK(run("attack --pub " + dir / "even.pub" + " --seed 0f --out " + dir / "rec.sec")
              .exit_code == 2);
}

TEST_CASE("degenerate keygen flag feeds the repair path end to end") {
    TempDir dir;
    REQUIRE(run("keygen " + kDeskArgs + " --seed 11 --degenerate 3:c --pub " + dir / "d.pub" +
                " --sec " + dir / "d.sec")
                .exit_code == 0);
    CHECK(run("attack --pub " + dir / "d.pub" + " --seed 12 --out " + dir / "drec.sec")
              .exit_code == 0);
    CHECK(run("verify --pub " + dir / "d.pub" + " --sec " + dir / "drec.sec" +
              " --trials 25 --seed 13")
              .exit_code == 0);
}

TEST_CASE("malformed files and usage errors exit nonzero") {
    TempDir dir;
    CHECK(run("decrypt --sec " + dir / "missing.sec" + " --ct x --out y").exit_code == 1);
    CHECK(run("attack --pub " + dir / "missing.pub" + " --out z").exit_code == 1);
    CHECK(run("bogus-subcommand").exit_code != 0);
    CHECK(run("keygen --preset id1").exit_code != 0); // missing required outputs
}

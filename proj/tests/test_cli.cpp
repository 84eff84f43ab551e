#include "support.hpp"
#include "turan/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace turan;
using namespace turan::testing;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;

    std::vector<json> records() const {
        std::vector<json> r;
        std::istringstream in(out);
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) r.push_back(json::parse(line));
        return r;
    }
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "turan");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (data_dir() / name).string(); }

std::string scratch(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("turan-cli-test-" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors and help") {
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"bogus"}).code == kExitUsage);
    CHECK(cli({"admissible", "-n", "6"}).code == kExitUsage);
    CHECK(cli({"admissible", "-n", "six", "-f", data("k4_family.txt")}).code == kExitUsage);
    const Outcome help = cli({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("blowup-check") != std::string::npos);
    CHECK(cli({"round", "-n", "6", "-f", data("h_family.txt"), "--target", "two ninths", "--in",
               data("two_ninths_n6.sol"), "--out", scratch("x.cert")})
              .code == kExitUsage);
    CHECK(cli({"construction", "--kind", "Q", "-n", "6"}).code == kExitUsage);
}

TEST_CASE("admissible census") {
    const Outcome o = cli({"admissible", "-n", "6", "-f", data("k4_family.txt"), "--count-only"});
    REQUIRE(o.code == kExitOk);
    const auto r = o.records();
    REQUIRE(r.size() == 1);
    CHECK(r[0]["count"] == 964);

    const Outcome listed = cli({"admissible", "-n", "6", "-f", data("h_family.txt")});
    const auto rows = listed.records();
    CHECK(rows[0]["count"] == 38);
    CHECK(rows.size() == 39);
    CHECK(rows[1]["index"] == 0);
    CHECK(cli({"admissible", "-n", "6", "-f", "/nonexistent/family"}).code == kExitIo);
}

TEST_CASE("verify and slack") {
    const Outcome ok = cli({"verify", "--cert", data("trivial_bound1.cert")});
    CHECK(ok.code == kExitOk);
    CHECK(ok.records()[0]["valid"] == true);

    const Outcome toy = cli({"verify", "--cert", data("sqrt5_toy.cert")});
    CHECK(toy.code == kExitOk);
    CHECK(toy.records()[0]["sharp"] == json::array({"5:"}));

    const Outcome bad = cli({"verify", "--cert", data("sqrt5_toy_perturbed.cert")});
    CHECK(bad.code == kExitInvalid);
    CHECK(bad.records()[0]["valid"] == false);

    CHECK(cli({"verify", "--cert", "/nonexistent/cert"}).code == kExitIo);
    const std::string garbage = scratch("garbage.cert");
    std::ofstream(garbage) << "not a certificate\n";
    CHECK(cli({"verify", "--cert", garbage}).code == kExitInvalid);

    const Outcome s = cli({"slack", "--cert", data("sqrt5_toy.cert")});
    CHECK(s.code == kExitOk);
    const auto rows = s.records();
    REQUIRE(rows.size() == 3);
    CHECK(rows[1]["slack"] == "11/20-3/20*sqrt(5)");
    CHECK(rows[2]["all_nonnegative"] == true);
}

TEST_CASE("blow-up check") {
    const Outcome o = cli({"blowup-check", "-f", data("f5.hg"), "-g", data("k4minus.hg")});
    CHECK(o.code == kExitOk);
    CHECK(o.records()[0]["contained"] == true);
    CHECK(o.err == "true\n");
    CHECK(cli({"blowup-check", "-f", "4:123,124,134,234", "-g", "4:123,124,134"}).records()[0]["contained"] == false);
}

TEST_CASE("lagrangian and construction") {
    const Outcome l = cli({"lagrangian", "-g", "5:123,234,345,145,125", "--witness", "1/5,1/5,1/5,1/5,1/5",
                           "--restarts", "20"});
    REQUIRE(l.code == kExitOk);
    const json r = l.records()[0];
    CHECK(r["exact"] == "6/25");
    CHECK(std::abs(r["value"].get<double>() - 0.24) < 1e-9);

    const Outcome c = cli({"construction", "--kind", "S", "-n", "12", "--check-free", data("h_family.txt")});
    REQUIRE(c.code == kExitOk);
    const json cr = c.records()[0];
    CHECK(cr["edges"] == 64);
    CHECK(cr["formula_edges"] == "64");
    CHECK(cr["free"] == true);

    const Outcome k = cli({"construction", "--kind", "B", "-n", "8", "--check-free", data("k4_family.txt")});
    CHECK(k.code == kExitOk);
    CHECK(k.records()[0]["free"] == false);
}

TEST_CASE("bound without a solver only writes the SDP") {
    unsetenv(kSolverEnv);
    const std::string sdp = scratch("emit.dat-s");
    const Outcome o = cli({"bound", "-n", "6", "-f", data("h_family.txt"), "--sdp", sdp});
    REQUIRE(o.code == kExitOk);
    const json r = o.records()[0];
    CHECK(r["constraints"] == 38);
    CHECK(r["solver"].is_null());
    CHECK(std::filesystem::exists(sdp));

    // the default location depends only on the problem
    const Outcome a = cli({"bound", "-n", "6", "-f", data("h_family.txt")});
    const Outcome b = cli({"bound", "-n", "6", "-f", data("h_family.txt")});
    CHECK(a.out == b.out);
    CHECK(slurp(a.records()[0]["sdp"].get<std::string>()) == slurp(sdp));
}

TEST_CASE("bound, round and verify end to end") {
    const std::string sol = scratch("e2e.sol"), cert = scratch("e2e.cert");
    const Outcome b = cli({"bound", "-n", "6", "-f", data("h_family.txt"), "--solver", TURAN_SOLVER_SCRIPT, "--sdp",
                           scratch("e2e.dat-s"), "--out", sol});
    REQUIRE(b.code == kExitOk);
    CHECK(std::abs(b.records()[0]["bound"].get<double>() - 2.0 / 9.0) < 1e-5);

    const Outcome r = cli({"round", "-n", "6", "-f", data("h_family.txt"), "--target", "2/9", "--in", sol, "--out",
                           cert, "--construction", "S"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.records()[0]["valid"] == true);
    const Outcome v = cli({"verify", "--cert", cert});
    CHECK(v.code == kExitOk);
    CHECK(v.records()[0]["graphs"] == 38);

    const Outcome fail = cli({"round", "-n", "6", "-f", data("h_family.txt"), "--target", "1/5", "--in", sol,
                              "--out", scratch("fail.cert"), "--schedule", "256"});
    CHECK(fail.code == kExitInvalid);
    CHECK(fail.records()[0]["valid"] == false);

    CHECK(cli({"bound", "-n", "6", "-f", data("h_family.txt"), "--solver", "/nonexistent/solver", "--sdp",
               scratch("e2e.dat-s")})
              .code == kExitIo);
}

TEST_CASE("identical inputs give byte-identical output") {
    const std::vector<std::string> lag{"lagrangian", "-g", "5:123,124,125,345", "--restarts", "30", "--seed", "7"};
    CHECK(cli(lag).out == cli(lag).out);
    const std::vector<std::string> adm{"admissible", "-n", "5", "-f", data("k4_family.txt")};
    CHECK(cli(adm).out == cli(adm).out);
    const std::vector<std::string> slack{"slack", "--cert", data("sqrt5_toy.cert")};
    CHECK(cli(slack).out == cli(slack).out);
}

}  // TEST_SUITE

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

const char* cli_path() { return std::getenv("BRATTELIKIT_CLI"); }

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

}  // namespace

TEST_CASE("cli commands behave end to end") {
    if (!cli_path()) {
        MESSAGE("BRATTELIKIT_CLI not set; skipping");
        return;
    }

    SUBCASE("examples list") {
        auto r = run("examples list");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("fibonacci") != std::string::npos);
        CHECK(r.out.find("chacon") != std::string::npos);
    }

    SUBCASE("certify fibonacci") {
        auto r = run("certify fibonacci");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("\"verdict\": \"UNIQUELY_ERGODIC\"") != std::string::npos);
    }

    SUBCASE("certify the divergent family") {
        auto r = run("certify mpn-divergent-3");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("LIMIT_UE_BUT_NO_FINITE_MEASURE") != std::string::npos);
    }

    SUBCASE("renormalize with functoriality check") {
        auto r = run("renormalize fibonacci --k 1 --check-functoriality");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("maxDeviation") != std::string::npos);
    }

    SUBCASE("surface export is byte-identical across runs") {
        auto a = run("surface fibonacci --depth 4 --svg -");
        auto b = run("surface fibonacci --depth 4 --svg -");
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.find("<svg") == 0);
    }

    SUBCASE("vershik orbits stream JSON lines") {
        auto r = run("vershik fibonacci --steps 5 --depth 6");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("\"startVertexIndex\"") != std::string::npos);
    }

    SUBCASE("validation failures exit with code 2") {
        std::string path = "/tmp/brattelikit_bad_spec.json";
        std::ofstream f(path);
        f << R"({"weldSize": 2,
                 "positive": {"kind": "explicit-window", "tailPolicy": "identity",
                              "matrices": [{"rows":2,"cols":2,"data":[1,0,0,0]}]},
                 "negative": {"kind": "stationary",
                              "period": [{"rows":2,"cols":2,"data":[1,0,0,1]}]}})";
        f.close();
        auto r = run("validate " + path);
        CHECK(r.exit_code == 2);
        CHECK(r.out.find("zero-row") != std::string::npos);
    }

    SUBCASE("weights --series on the divergent family") {
        auto r = run("weights mpn-divergent-3 --series --depth 10");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("\"unboundedTrend\": true") != std::string::npos);
    }

    SUBCASE("strict certification exits 4 when inconclusive") {
        auto r = run("certify block-diagonal --strict");
        CHECK(r.exit_code == 4);
        CHECK(r.out.find("INCONCLUSIVE") != std::string::npos);
    }

    SUBCASE("file specs work through solve weights") {
        std::string path = "/tmp/brattelikit_fib_spec.json";
        std::ofstream f(path);
        f << R"({"weldSize": 2,
                 "positive": {"kind": "stationary", "period": [{"rows":2,"cols":2,"data":[1,1,1,0]}]},
                 "negative": {"kind": "stationary", "period": [{"rows":2,"cols":2,"data":[1,1,1,0]}]}})";
        f.close();
        auto r = run("surface " + path + " --depth 3 --json -");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("\"area\"") != std::string::npos);
    }
}

#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    const std::string cmd = std::string(YOCCOZ_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& body) {
    const std::string path = std::string(YOCCOZ_TMP) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("cli: lamination report") {
    auto r = run("lamination --p 1 --q 2 --theta-v 3/7 --depth 6");
    REQUIRE(r.status == 0);
    auto j = json::parse(r.out);
    CHECK(j["command"] == "lamination");
    CHECK(j["result"]["polygons_per_depth"][6] == 64);
    CHECK(j["result"]["polygons"][6].size() == 64);
    CHECK(j["config"]["theta-v"] == "3/7");
    CHECK(j["config"]["depth"] == "6");
}

TEST_CASE("cli: exit codes") {
    CHECK(run("lamination --p 1 --q 2 --depth 6").status == 2);
    CHECK(run("lamination --p 1 --q 2 --theta-v 3/7 --depth 0").status == 2);
    CHECK(run("trace --theta 1/3 --pot-lo -1").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("").status == 2);

    // The angle whose orbit lands on the alpha cycle has no lamination.
    auto e = run("lamination --p 1 --q 2 --theta-v 5/12 --depth 6");
    CHECK(e.status == 1);
    CHECK(json::parse(e.out)["error"]["code"] == "case1-degenerate");
    auto nc = run("trace --c-re 1 --theta 1/3");
    CHECK(nc.status == 1);
    CHECK(json::parse(nc.out)["error"]["code"] == "not-connected");
}

TEST_CASE("cli: config file with flag overrides") {
    auto cfg = temp_file("renorm.cfg", "# satellite fixture\ntheta-v = 2/5\ndepth = 30\nbudget = 4\n");
    auto a = run("renorm --config " + cfg);
    REQUIRE(a.status == 0);
    auto j = json::parse(a.out);
    CHECK(j["result"]["kind"] == "satellite");
    CHECK(j["config"]["budget"] == "4");
    auto b = run("renorm --config " + cfg + " --budget 6");
    REQUIRE(b.status == 0);
    CHECK(json::parse(b.out)["config"]["budget"] == "6");

    auto bad = temp_file("bad.cfg", "theta-v = 2/5\npixels = 10\n");
    CHECK(run("renorm --config " + bad).status == 2);
    auto junk = temp_file("junk.cfg", "theta-v\n");
    CHECK(run("renorm --config " + junk).status == 2);
}

TEST_CASE("cli: trivial tiling") {
    auto r = run("tile --p 1 --q 2 --theta-v 1/6 --level 8");
    REQUIRE(r.status == 0);
    auto j = json::parse(r.out)["result"];
    CHECK(j["case"] == "trivial-case1");
    CHECK(j["tiles"].size() == 1);
    CHECK(j["residual"]["empty"] == true);
}

TEST_CASE("cli: reports are byte-stable") {
    for (const char* args : {"lamination --theta-v 3/7 --depth 5", "sobolev verify --depth 3 --trials 2 --seed 7",
                             "qc diamond --grid 32", "tune --a0 01 --a1 10 --theta 1/3"}) {
        auto a = run(args), b = run(args);
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("cli: qc and sobolev summaries") {
    auto d = json::parse(run("qc diamond --grid 64").out)["result"];
    CHECK(d["above_three"] == 0);
    auto s = json::parse(run("sobolev verify --depth 3 --trials 2").out)["result"];
    CHECK(s["violations"] == 0);
    CHECK(s["trials"] == 2);

    const std::string out = std::string(YOCCOZ_TMP) + "/strip.json";
    REQUIRE(run("qc strip --depth 2 --out " + out).status == 0);
    std::ifstream f(out);
    auto j = json::parse(f);
    CHECK(j["result"]["slits"].size() == 7);  // 1 + 2 + 4 slits
}

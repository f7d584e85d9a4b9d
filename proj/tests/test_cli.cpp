#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(KK_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

json run_json(const std::string& args, int* code = nullptr) {
    auto r = run(args + " --json");
    if (code) *code = r.code;
    return json::parse(r.out);
}

void check_schema(const json& j, int code) {
    CHECK(j.contains("command"));
    CHECK(j.contains("witnesses"));
    CHECK(j.contains("tables"));
    CHECK(j.contains("version"));
    CHECK(j.contains("input_hash"));
    CHECK((j.contains("ok") != j.contains("status")));
    bool pass = (j.contains("ok") && j["ok"].get<bool>()) || (j.contains("status") && j["status"] == "open");
    CHECK((code == 0) == pass);
    if (j.contains("ok") && !j["ok"].get<bool>()) CHECK(!j["witnesses"].empty());
}

}  // namespace

TEST_CASE("documented invocations") {
    CHECK(run("check-d2 --example hopf").code == 0);

    int code;
    auto k = run_json("koszul --example unknot_minus --degrees -10..0 --max-len 12", &code);
    CHECK(code == 0);
    CHECK(k["ok"] == true);
    CHECK(k["tables"]["verdict"] == "acyclic_in_window");
    CHECK(k["tables"]["betti"]["0"] == 1);
    CHECK(k["tables"]["betti"]["-10"] == 0);

    auto a = run_json("augmentations --example trefoil --field gf2", &code);
    CHECK(code == 0);
    CHECK(a["tables"]["count"] == 5);
    CHECK(a["tables"]["augmentations"].size() == 5);
}

TEST_CASE("exploratory verdicts are open and exit 0") {
    int code;
    auto h = run_json("koszul --example hopf --degrees -4..0 --max-len 6", &code);
    CHECK(code == 0);
    CHECK(h["status"] == "open");
    CHECK(!h.contains("ok"));
    auto p = run_json("primitive --example trefoil --max-len 5", &code);
    CHECK(code == 0);
    CHECK(p["status"] == "open");
}

TEST_CASE("failing checks carry witnesses") {
    int code;
    auto j = run_json("check-d2 --example spheres_plus", &code);
    CHECK(code == 1);
    CHECK(j["ok"] == false);
    CHECK(!j["witnesses"].empty());
    CHECK(j["tables"]["sign_repair"]["ce"]["found"] == true);
    // the same table over GF(2) is fine
    CHECK(run("check-d2 --example spheres_plus --field gf2").code == 0);
}

TEST_CASE("usage and input errors") {
    auto r = run("check-d2 --example hopf --degrees", true);
    CHECK(r.code == 2);
    r = run("frobnicate", true);
    CHECK(r.code == 2);
    r = run("koszul --example unknot_minus --degrees 3..1", true);
    CHECK(r.code == 2);
    r = run("check-d2 --example bogus", true);
    CHECK(r.code == 3);
    CHECK(r.out.find("unknown example") != std::string::npos);
    r = run("augmentations --example trefoil", true);
    CHECK(r.code == 2);
    r = run("check-d2 --input /nonexistent/file.kk", true);
    CHECK(r.code == 3);

    std::string path = "cli_bad_input.kk";
    std::ofstream(path) << "dga a {\n  vertex 1 -;\n  gen c1 : 1 -> 1 deg -1;\n  d c1 = c21;\n}\n";
    r = run("check-d2 --input " + path, true);
    CHECK(r.code == 3);
    CHECK(r.out.find("4:10") != std::string::npos);
    CHECK(r.out.find("unknown generator") != std::string::npos);
}

TEST_CASE("every subcommand honours the report schema") {
    const char* cases[] = {
        "check-d2 --example trefoil",
        "check-d2 --example spheres_plus",
        "check-ainf --example hopf_small",
        "check-ainf --example hopf_la",
        "check-coainf --example hopf",
        "cobar --example hopf_small --name 'dual(cf)' --degrees -2..0 --max-len 3",
        "bar --example hopf_small --max-len 3",
        "dual --example hopf --name lc",
        "dual --example hopf_small --side right",
        "augmentations --example hopf --field gf3",
        "twist-verify --example hopf",
        "twist-verify --example hopf_parallel",
        "koszul --example spheres_minus",
        "homology --example hopf_la --name la",
        "homology --example s1_model --degrees -2..0 --max-len 3",
        "quasi-iso --example hopf_la --field gf2",
        "quasi-iso --example hopf --map retract --degrees -2..0 --max-len 3",
        "primitive --example trefoil --max-len 3",
        "rewrite --example mirror72",
        "cube-demo --dim 2",
        "dim --degree -2",
        "dim --formula sy --n 3 --sy +1,-0",
        "examples",
        "examples --example unknot_minus",
    };
    for (auto c : cases) {
        INFO(c);
        int code;
        auto j = run_json(c, &code);
        check_schema(j, code);
        CHECK(j["version"] == KK_VERSION);
    }
}

TEST_CASE("reports are deterministic") {
    for (auto c : {"cube-demo --seed 7 --dim 2", "check-d2 --example spheres_plus", "twist-verify --example hopf",
                   "augmentations --example trefoil --field gf3"}) {
        auto a = run(std::string(c) + " --json"), b = run(std::string(c) + " --json");
        CHECK(a.out == b.out);
    }
    auto x = run_json("check-d2 --example spheres_plus");
    auto y = run_json("check-d2 --example spheres_plus --param m=2");
    CHECK(x["input_hash"] != y["input_hash"]);
    CHECK(run_json("dim --degree 1")["input_hash"].is_null());
}

TEST_CASE("text output ends with a verdict line") {
    auto r = run("check-d2 --example hopf");
    CHECK(r.out.find("check-d2 hopf: ok") != std::string::npos);
    r = run("twist-verify --example hopf");
    CHECK(r.out.find("[ok] d t(c1) = t(s1) + t(c12) t(c21)") != std::string::npos);
}

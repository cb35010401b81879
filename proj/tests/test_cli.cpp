#include "doctest.h"

#include <sstream>

#include "json.hpp"

#include "gridhom/cli.hpp"
#include "gridhom/library.hpp"
#include "gridhom/report.hpp"

using namespace gridhom;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    Run r;
    r.code = run_cli(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    Run r = run(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("half values print as p/2") {
    CHECK(half_value(4) == json(2));
    CHECK(half_value(-3) == json("-3/2"));
    CHECK(half_text(1) == "1/2");
    CHECK(half_text(-6) == "-3");
}

TEST_CASE("report json: schema, empty violations, row order") {
    Report r("x");
    ReportTable t{"t", {"dim"}, {}};
    t.rows.push_back({0, -2, {1}});
    t.rows.push_back({-1, 2, {1}});
    t.rows.push_back({1, 2, {1}});
    r.add_table(t);
    r.add_check({"c", 3, {}});
    json j = r.to_json();
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["violations"].is_array());
    CHECK(j["violations"].empty());
    CHECK(j["ok"] == true);
    auto& rows = j["tables"]["t"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["m"] == 1);
    CHECK(rows[1]["m"] == -1);
    CHECK(rows[2]["a"] == -1);
    r.add_violation("bad");
    CHECK_FALSE(r.ok());
    CHECK(r.to_json()["violations"].size() == 1);
}

TEST_CASE("json output parses and reserializes to the same document") {
    Run r = run({"homology", "--knot", "builtin:hopf", "--variant", "gc_hat", "--format", "json"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(json::parse(j.dump()) == j);
    bool half = false;
    for (auto& row : j["tables"]["gc_hat"]) half = half || row["a"] == "-3/2";
    CHECK(half);
}

TEST_CASE("invariants of the trefoil through the cli") {
    json j = run_json({"invariants", "--knot", "builtin:trefoil"});
    CHECK(j["command"] == "invariants");
    CHECK(j["results"]["tau"] == 1);
    CHECK(j["results"]["tower"]["m"] == -2);
    CHECK(j["results"]["tower"]["a"] == -1);
    CHECK(j["results"]["del1_star"]["identically_zero"] == true);
}

TEST_CASE("output is identical across runs and thread counts") {
    Run a = run({"invariants", "--knot", "builtin:figure_eight", "--format", "json", "--threads", "1"});
    Run b = run({"invariants", "--knot", "builtin:figure_eight", "--format", "json", "--threads", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("window flag accepts halves") {
    json j = run_json({"homology", "--knot", "builtin:hopf", "--window", "-3/2:1/2:1"});
    CHECK(j["settings"]["window"]["a_lo"] == "-3/2");
    CHECK(j["settings"]["window"]["a_hi"] == "1/2");
    CHECK(j["settings"]["window"]["vmax"] == 1);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"nosuch"}).code == 2);
    CHECK(run({"homology"}).code == 2);
    CHECK(run({"homology", "--knot", "builtin:trefoil", "--variant", "zz"}).code == 2);
    CHECK(run({"homology", "--knot", "builtin:trefoil", "--window", "3:1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    Run bad = run({"homology", "--knot", "builtin:nosuch"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("UnknownBuiltin") != std::string::npos);
    CHECK(run({"moves", "--knot", "builtin:trefoil", "--move", "commutation:9"}).code == 1);
    CHECK(run({"library", "--check"}).code == 0);
}

TEST_CASE("moves subcommand keeps the knot type") {
    json j = run_json({"moves", "--knot", "builtin:trefoil", "--move", "stabilize:1", "--move", "commutation:2"});
    CHECK(j["results"]["steps"].size() == 2);
    CHECK(j["results"]["legal_at_start"].size() == 4);
    CHECK(j["results"]["components"] == 1);
    GridDiagram g = load_diagram(j["results"]["result"].get<std::string>());
    CHECK(g.n == 6);
    json k = run_json({"invariants", "--knot", j["results"]["result"].get<std::string>()});
    CHECK(k["results"]["tau"] == 1);
}

TEST_CASE("verify and skein subcommands") {
    json d = run_json({"verify", "--suite", "d_squared", "--n", "3", "--exhaustive"});
    CHECK(d["ok"] == true);
    CHECK(d["checks"].size() >= 4);
    json s = run_json({"skein"});
    CHECK(s["ok"] == true);
    CHECK(s["results"]["exact"] == true);
    CHECK(s["results"]["composite_annuli"] == 4);
    json sp = run_json({"spectral", "--knot", "builtin:trefoil", "--rmax", "3"});
    CHECK(sp["results"]["converges_to_ghl"] == true);
}

TEST_CASE("diagram text round trip through load_diagram") {
    for (auto& e : builtin_library()) {
        GridDiagram g = load_diagram(to_text(e.g));
        CHECK(g.o_rows == e.g.o_rows);
        CHECK(g.x_rows == e.g.x_rows);
    }
}

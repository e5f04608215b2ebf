#include "arsim/expr.hpp"
#include "arsim/run.hpp"
#include "arsim/scenario.hpp"

#include <doctest.h>

#include <filesystem>

using namespace arsim;
using nlohmann::json;

namespace {

std::string path(const std::string& name) { return std::string(ARSIM_SCENARIO_DIR) + "/" + name + ".json"; }

std::vector<std::size_t> sizes(const Scenario& s) {
    std::vector<std::size_t> out;
    for (const auto& g : s.groups) {
        out.push_back(g.members.size());
    }
    return out;
}

json minimal() {
    return json::parse(R"({
      "name": "minimal",
      "config": {"n": 4, "f": 1, "tau": 2, "t": 1},
      "groups": [{"name": "G1", "size": "f"}, {"name": "G2", "size": "n-f"}],
      "processes": {"writers": ["w"], "readers": [{"id": "r", "correct": true}]},
      "steps": [
        {"op": "write", "writer": "w", "value": "v", "payload": "07", "deliver": "all"},
        {"op": "read", "reader": "r", "targets": "all"},
        {"op": "audit", "quorum": "G2"}
      ],
      "expect": [{"t": "1..n-2f", "completeness": true, "strong_accuracy": true}]
    })");
}

std::string error_where(const json& doc, const Overrides& ov = {}) {
    try {
        instantiate(doc, ov);
    } catch (const ScenarioError& e) {
        return e.where();
    }
    return "accepted";
}

}  // namespace

TEST_CASE("formulas") {
    const std::map<std::string, std::int64_t> vars{{"n", 7}, {"f", 2}, {"tau", 5}};
    CHECK(eval_expr("n-tau-2f+1", vars) == -1);
    CHECK(eval_expr("3(tau-1)", vars) == 12);
    CHECK(eval_expr("-f*2", vars) == -4);
    CHECK(eval_expr(" 4 ", vars) == 4);
    CHECK_THROWS_AS(eval_expr("n+", vars), ExprError);
    CHECK_THROWS_AS(eval_expr("m", vars), ExprError);
    CHECK_THROWS_AS(eval_expr("(n", vars), ExprError);
}

TEST_CASE("bundled figures expand to their group sizes") {
    const auto f1 = load_scenario(path("figure1"));
    CHECK(sizes(f1) == std::vector<std::size_t>{1, 1, 1, 2});
    CHECK(f1.groups[0].members == ObjectSet{1});
    CHECK(f1.groups[3].members == ObjectSet{4, 5});

    const auto f2 = load_scenario(path("figure2"));
    CHECK(sizes(f2) == std::vector<std::size_t>{1, 1, 1, 1, 3});
    const auto f2b = load_scenario(path("figure2"), Overrides{std::nullopt, 5, std::nullopt, std::nullopt, std::nullopt});
    CHECK(sizes(f2b) == std::vector<std::size_t>{1, 3, 1, 1, 1});
}

TEST_CASE("overrides") {
    Overrides ov;
    ov.tau = 4;
    ov.model = Model::Signed;
    ov.seed = 99;
    const auto s = load_scenario(path("figure1"), ov);
    CHECK(s.cfg.tau == 4);
    CHECK(s.cfg.signing == Signing::Generic);
    CHECK(s.seed == 99);
    CHECK(sizes(s) == std::vector<std::size_t>{1, 2, 1, 1});
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_scenario_text("{\n  \"name\": \"x\",\n  \"config\": {\"n\": 4,,}\n}");
        FAIL("parsed");
    } catch (const ScenarioError& e) {
        CHECK(e.where() == "line 3, column 21");
    }
}

TEST_CASE("validation errors name the field") {
    auto doc = minimal();
    CHECK(error_where(doc) == "accepted");

    auto d = doc;
    d["objects"] = json::parse(R"([{"select": [1, 2], "faulty": true}])");
    CHECK(error_where(d) == "objects");

    d = doc;
    d["groups"][1]["size"] = "n-5f";
    CHECK(error_where(d) == "groups[1].size");

    d = doc;
    d["steps"][2]["quorum"] = "all";
    CHECK(error_where(d) == "steps[2].quorum");

    d = doc;
    d["steps"][1]["reader"] = "nobody";
    CHECK(error_where(d) == "steps[1].reader");

    d = doc;
    d["steps"][1]["targets"] = "G1+G7";
    CHECK(error_where(d) == "steps[1].targets");

    d = doc;
    d["config"].erase("f");
    CHECK(error_where(d) == "config.f");

    d = doc;
    d["config"]["model"] = "psychic";
    CHECK(error_where(d) == "config.model");

    d = doc;
    d["objects"] = json::parse(R"([{"select": "G1", "omit_records_to_audit": true}])");
    CHECK(error_where(d) == "objects[0]");

    d = doc;
    d["expect"][0]["models"] = {"fast", "slow"};
    CHECK(error_where(d) == "expect[0].models[1]");

    CHECK(error_where(doc, Overrides{std::nullopt, 5, std::nullopt, std::nullopt, std::nullopt}) == "config");
}

TEST_CASE("object set expressions") {
    const std::vector<Group> groups{{"G1", {1}}, {"G2", {2, 3}}, {"G3", {4, 5}}};
    CHECK(expand_set("G1+G3", groups, 5, "x") == ObjectSet{1, 4, 5});
    CHECK(expand_set("all-G2", groups, 5, "x") == ObjectSet{1, 4, 5});
    CHECK(expand_set(3, groups, 5, "x") == ObjectSet{3});
    CHECK(expand_set(json::array({5, 1}), groups, 5, "x") == ObjectSet{1, 5});
    CHECK_THROWS_AS(expand_set(json::array({6}), groups, 5, "x"), ScenarioError);
    CHECK_THROWS_AS(expand_set("G9", groups, 5, "x"), ScenarioError);
}

TEST_CASE("every bundled scenario meets its expectations") {
    for (const auto& entry : std::filesystem::directory_iterator(ARSIM_SCENARIO_DIR)) {
        CAPTURE(entry.path().string());
        const auto report = execute(load_scenario(entry.path().string()));
        for (const auto& c : report.checks) {
            CAPTURE(c.subject);
            CAPTURE(c.t);
            CHECK(c.ok);
        }
        CHECK(report.matched());
    }
}

TEST_CASE("a concrete export replays identically") {
    for (const auto* name : {"figure1", "figure2", "fabrication", "token_replay"}) {
        CAPTURE(name);
        Overrides ov;
        if (std::string(name) == "token_replay") {
            ov.model = Model::NonFastSigned;
        }
        const auto s = load_scenario(path(name), ov);
        const auto exported = scenario_to_json(s);
        const auto again = instantiate(exported);
        CHECK(scenario_to_json(again) == exported);
        CHECK(report_json_lines(execute(again)) == report_json_lines(execute(s)));
    }
}

TEST_CASE("a deadlocked audit names its step") {
    auto doc = minimal();
    doc["objects"] = json::parse(R"([{"select": "G2", "faulty": false}, {"select": 2, "faulty": true, "crash_after_event": 0}])");
    doc["steps"][2]["quorum"] = json::array({1, 2, 3});
    try {
        execute(instantiate(doc));
        FAIL("ran");
    } catch (const RunError& e) {
        CHECK(e.step() == 2);
    }
}

TEST_CASE("seed overrides change nothing but the seed when the schedule is fixed") {
    const auto a = execute(load_scenario(path("figure1")));
    const auto b = execute(load_scenario(path("figure1")));
    CHECK(report_json_lines(a) == report_json_lines(b));
}

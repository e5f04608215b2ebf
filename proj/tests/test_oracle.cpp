#include "arsim/oracle.hpp"

#include "sim_fixture.hpp"

#include <doctest.h>

using namespace arsim;
using namespace fixture;

namespace {

struct Run {
    std::unique_ptr<Simulation> sim;
    AuditReport report;
    Label v;
};

// r2 (faulty) reads three of five objects; object 1 hides its records and
// vouches for r1, which never reads.
Run sample(std::size_t t) {
    FaultScript s;
    s.is_faulty = true;
    s.omit_records_to_audit = true;
    s.fabricate.push_back({R1, Label{W, 1}});
    Run r{make(config(5, 3), {s}), {}, {}};
    r.v = r.sim->a_write(W, Value::from_hex("0102"), {all(5), false}).label;
    r.sim->a_read_fast(R2, {1, 2, 3});
    r.report = a_audit(*r.sim, A, ObjectSet{1, 2, 4, 5}, t);
    return r;
}

}  // namespace

TEST_CASE("property names") {
    for (auto p : kAllProperties) {
        CHECK(parse_property(to_string(p)) == p);
    }
    CHECK(parse_property("wa") == Property::WeakAccuracy);
    CHECK(parse_property("strong-accuracy") == Property::StrongAccuracy);
    CHECK_FALSE(parse_property("liveness"));
}

TEST_CASE("providing sets and effective reads come from the trace") {
    const auto r = sample(1);
    const auto& trace = r.sim->trace();
    const auto ps = providing_sets(trace);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].reader == R2);
    CHECK(ps[0].label == r.v);
    CHECK(ps[0].objects == ObjectSet{1, 2, 3});
    CHECK(effective_reads(trace, 3) == std::vector<ReadPair>{{R2, r.v}});
    CHECK(effective_reads(trace, 4).empty());
}

TEST_CASE("verdicts of the sample run") {
    for (std::size_t t = 1; t <= 5; ++t) {
        CAPTURE(t);
        const auto r = sample(t);
        const auto& trace = r.sim->trace();
        const auto& cfg = r.sim->config();
        const auto c = check(Property::Completeness, trace, r.report, cfg);
        CHECK(c.holds == (t <= 1));
        if (!c.holds) {
            CHECK(c.witness == ReadPair{R2, r.v});
        }
        const auto wa = check(Property::WeakAccuracy, trace, r.report, cfg);
        CHECK(wa.holds == (t >= 2));
        if (!wa.holds) {
            CHECK(wa.witness == ReadPair{R1, r.v});
        }
        CHECK(check(Property::StrongAccuracy, trace, r.report, cfg).holds == (t >= 2));
    }
}

TEST_CASE("weak accuracy modes differ on a reader reported for a value it never saw") {
    auto sim = make(config(5, 3));
    const auto v = sim->a_write(W, Value::from_hex("01"), {all(5), false}).label;
    sim->a_read_fast(R1, {5});
    const auto x = sim->a_write(W, Value::from_hex("02"), {all(5), false}).label;
    const auto report = a_audit(*sim, A, std::nullopt, 1);
    TraceFacts facts(sim->trace(), report.invoked_at, 3);
    CHECK(facts.providing_size(R1, v) == 1);
    std::vector<Evidence> claim{{R1, x, {1}}};
    CHECK(facts.check(Property::WeakAccuracy, claim, WeakAccuracyMode::ReaderLevel).holds);
    CHECK_FALSE(facts.check(Property::WeakAccuracy, claim, WeakAccuracyMode::PerValue).holds);
    CHECK(facts.check(Property::WeakAccuracy, {{R1, v, {5}}}, WeakAccuracyMode::PerValue).holds);
    CHECK_FALSE(facts.check(Property::StrongAccuracy, {{R1, v, {5}}}).holds);
}

TEST_CASE("the audit ordinal must be an audit invocation") {
    const auto r = sample(1);
    CHECK_THROWS_AS(TraceFacts(r.sim->trace(), 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(TraceFacts(r.sim->trace(), 10'000, 3), std::invalid_argument);
    CHECK_NOTHROW(TraceFacts(r.sim->trace(), r.report.invoked_at, 3));
}

TEST_CASE("serialised traces reload to the same verdicts") {
    const auto r = sample(1);
    const auto j = trace_to_json(r.sim->trace());
    const auto back = trace_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == r.sim->trace());
    CHECK(trace_to_json(back) == j);
    for (auto p : kAllProperties) {
        CHECK(check(p, back, r.report, r.sim->config()) == check(p, r.sim->trace(), r.report, r.sim->config()));
    }
}

TEST_CASE("providing sets only grow along the trace") {
    auto sim = make(config(5, 3));
    sim->a_write(W, Value::from_hex("01"), {all(5), false});
    sim->a_read_fast(R1, {1, 2});
    sim->a_read_fast(R1, {3, 4});
    sim->a_write(W, Value::from_hex("02"), {{1, 2, 3, 4}, false});
    sim->a_read_fast(R2, all(5));
    const auto end = sim->trace().next_ordinal();
    std::map<ReadPair, ObjectSet> prev;
    for (std::uint64_t k = 1; k <= end; ++k) {
        std::map<ReadPair, ObjectSet> cur;
        for (const auto& p : providing_sets(sim->trace(), k)) {
            cur[{p.reader, p.label}] = p.objects;
        }
        for (const auto& [key, objs] : prev) {
            REQUIRE(cur.contains(key));
            CHECK(std::includes(cur[key].begin(), cur[key].end(), objs.begin(), objs.end()));
        }
        const auto eff = effective_reads(sim->trace(), 3, k);
        for (const auto& pr : eff) {
            CHECK(cur[pr].size() >= 3);
        }
        prev = std::move(cur);
    }
    CHECK(effective_reads(sim->trace(), 3) == std::vector<ReadPair>{{R1, Label{W, 1}}, {R2, Label{W, 2}}});
}

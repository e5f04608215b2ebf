#include "arsim/emulation.hpp"

#include "sim_fixture.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace arsim;
using namespace fixture;

namespace {

std::size_t count_events(const ExecutionTrace& trace, EventKind kind, MessageKind msg, OpId op) {
    std::size_t c = 0;
    for (const auto& e : trace.events()) {
        if (e.kind == kind && e.message == msg && e.op_id == op) {
            ++c;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("fast write then read recovers the value in one round") {
    auto sim = make(config(5, 3));
    const auto v = Value::from_hex("beef");
    const auto w = sim->a_write(W, v, {all(5), false});
    CHECK(sim->op_complete(w.op));
    CHECK(w.label == Label{W, 1});

    const auto out = sim->a_read_fast(R1, all(5));
    REQUIRE(out.recovered);
    CHECK(*out.recovered == v);
    CHECK(*out.recovered_label == w.label);
    const auto read_op = sim->last_op();
    CHECK(sim->op_complete(read_op));
    CHECK(count_events(sim->trace(), EventKind::Deliver, MessageKind::ReadRequest, read_op) == 5);
    CHECK(count_events(sim->trace(), EventKind::Deliver, MessageKind::LabelQuery, read_op) == 0);
}

TEST_CASE("write completes once n - f objects acknowledge") {
    auto sim = make(config(5, 3));
    const auto w = sim->a_write(W, Value::from_hex("01"), {{1, 2, 3}, false});
    CHECK_FALSE(sim->op_complete(w.op));
    sim->deliver_write(w.op, {4});
    CHECK(sim->op_complete(w.op));
    CHECK_FALSE(sim->object(5).stored().has_value());
}

TEST_CASE("fewer than tau blocks recover nothing") {
    auto sim = make(config(5, 3));
    sim->a_write(W, Value::from_hex("01"), {all(5), false});
    const auto out = sim->a_read_fast(R1, {1, 2});
    CHECK_FALSE(out.recovered);
    CHECK(out.blocks_received.size() == 2);
    const auto later = sim->a_read_fast(R1, {5});
    CHECK(later.recovered);
}

TEST_CASE("labels increase per writer and order by sequence number") {
    auto sim = make(config(4, 2));
    const auto a = sim->a_write(W, Value::from_hex("01"), {all(4), false});
    const auto b = sim->a_write(W, Value::from_hex("02"), {all(4), false});
    CHECK(a.label < b.label);
    CHECK(Label{9, 1} < Label{1, 2});
    CHECK(sim->a_read_fast(R1, all(4)).recovered == Value::from_hex("02"));
}

TEST_CASE("configuration checks") {
    CHECK_THROWS_AS(make(config(5, 3), {{true}, {true}}), std::invalid_argument);
    auto bad = config(4, 2);
    bad.tau = 1;
    CHECK_THROWS_AS(make(bad), std::invalid_argument);
    auto sim = make(config(4, 2));
    CHECK_THROWS_AS(sim->a_write(R1, Value::from_hex("01"), {all(4), false}), std::invalid_argument);
    CHECK_THROWS_AS(sim->a_read_fast(W, all(4)), std::invalid_argument);
    CHECK_THROWS_AS(sim->a_read_fast(R1, {7}), std::invalid_argument);
    CHECK_THROWS_AS(sim->sequence(SequencedRead{R1, all(4)}), std::logic_error);
}

TEST_CASE("a crashed quorum member deadlocks the audit") {
    FaultScript crash;
    crash.is_faulty = true;
    crash.crash_after_event = 0;
    auto sim = make(config(4, 2), {crash});
    sim->a_write(W, Value::from_hex("01"), {{2, 3, 4}, false});
    CHECK_THROWS_AS(sim->gather_logs(A, ObjectSet{1, 2, 3}), SchedulerDeadlock);
    auto sim2 = make(config(4, 2), {crash});
    sim2->a_write(W, Value::from_hex("01"), {{2, 3, 4}, false});
    const auto logs = sim2->gather_logs(A, std::nullopt);
    CHECK(logs.quorum == ObjectSet{2, 3, 4});
}

TEST_CASE("same seed, same trace") {
    auto run = [](std::uint64_t seed) {
        auto sim = make(config(5, 3), {}, seed);
        sim->a_write(W, Value::from_hex("0102"), {all(5), false});
        sim->a_read_fast(R1, all(5));
        sim->gather_logs(A, std::nullopt);
        return sim->take_trace();
    };
    CHECK(run(4) == run(4));
}

TEST_CASE("total order rejects partial writes") {
    auto sim = make(config(5, 4, Model::Total));
    CHECK_THROWS_AS(sim->a_write(W, Value::from_hex("01"), {{1, 2, 3, 4}, false}), std::invalid_argument);
}

TEST_CASE("under total order each read sees at most one label") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 50; ++round) {
        auto sim = make(config(5, 4, Model::Total), {}, rng());
        std::uint8_t payload = 1;
        for (int op = 0; op < 8; ++op) {
            if (rng() % 2 == 0) {
                sim->sequence(SequencedWrite{W, Value({payload++})});
            } else {
                ObjectSet targets;
                for (ObjectIndex k = 1; k <= 5; ++k) {
                    if (rng() % 3 != 0) {
                        targets.push_back(k);
                    }
                }
                sim->sequence(SequencedRead{R1, targets});
            }
        }
        std::map<OpId, std::set<Label>> seen;
        for (const auto& e : sim->trace().events()) {
            if (e.kind == EventKind::Respond && e.message == MessageKind::ReadReply && e.label) {
                seen[e.op_id].insert(*e.label);
            }
        }
        for (const auto& [op, labels] : seen) {
            CHECK(labels.size() <= 1);
        }
    }
}

TEST_CASE("two-round read returns the newest label held by n - f objects") {
    auto sim = make(config(5, 3, Model::NonFast));
    const auto v = sim->a_write(W, Value::from_hex("0a"), {all(5), false});
    sim->a_write(W, Value::from_hex("0b"), {{1, 2}, false});
    NonFastSchedule s;
    s.targets = all(5);
    const auto out = sim->a_read_nonfast(R1, s);
    REQUIRE(out.recovered);
    CHECK(*out.recovered_label == v.label);
    CHECK(*out.recovered == Value::from_hex("0a"));
    const auto op = sim->last_op();
    CHECK(count_events(sim->trace(), EventKind::Deliver, MessageKind::LabelQuery, op) == 5);
}

TEST_CASE("only a faulty reader may force the label of round two") {
    auto sim = make(config(5, 3, Model::NonFast));
    const auto x = sim->a_write(W, Value::from_hex("0b"), {{1, 2, 3, 4}, false});
    NonFastSchedule s;
    s.targets = all(5);
    s.forced_label = x.label;
    CHECK_THROWS_AS(sim->a_read_nonfast(R1, s), std::invalid_argument);
    CHECK_NOTHROW(sim->a_read_nonfast(R2, s));
}

TEST_CASE("tokens are minted only by the environment") {
    TokenRegistry reg;
    const auto t = reg.mint(R1, std::nullopt);
    CHECK(reg.genuine(t));
    auto stolen = t;
    stolen.reader = R2;
    CHECK_FALSE(reg.genuine(stolen));
    auto relabelled = reg.mint(R1, Label{1, 1});
    relabelled.label = Label{1, 2};
    CHECK_FALSE(reg.genuine(relabelled));
    CHECK_FALSE(reg.genuine(SignedToken{t.nonce + 100, R1, std::nullopt}));

    FaultScript fab;
    fab.is_faulty = true;
    fab.fabricate.push_back({R1, Label{W, 1}});
    auto sim = make(config(5, 3, Model::Signed), {fab});
    sim->a_write(W, Value::from_hex("01"), {all(5), false});
    sim->gather_logs(A, std::nullopt);
    for (const auto& [nonce, tok] : sim->tokens().minted()) {
        CHECK(tok.reader != R1);
    }
    const auto log = *sim->object(1).rw_get_log();
    REQUIRE(log.size() == 1);
    CHECK_FALSE(log[0].token.has_value());
}

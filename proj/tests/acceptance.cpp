// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Every comparison is exact: record
// counts, verdicts and table cells are integers or booleans, so the
// tolerance is zero throughout.

#include "arsim/bounds.hpp"
#include "arsim/dispersal.hpp"
#include "arsim/run.hpp"
#include "arsim/scenario.hpp"
#include "arsim/search.hpp"

#include "gf_oracle.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace arsim;

namespace {

constexpr std::size_t kF = 1;

std::string scenario_path(const std::string& name) {
    return std::string(ARSIM_SCENARIO_DIR) + "/" + name + ".json";
}

Scenario load(const std::string& name, std::optional<std::size_t> n = std::nullopt,
              std::optional<std::size_t> tau = std::nullopt, std::optional<Model> model = std::nullopt) {
    Overrides ov;
    ov.n = n;
    ov.tau = tau;
    ov.model = model;
    return load_scenario(scenario_path(name), ov);
}

ProcessId pid(const Scenario& s, const std::string& name) { return s.processes.find(name)->id; }

PropertyVerdict verdict(const RunReport& run, std::size_t t, Property p) {
    return verdicts_at(run, run.audits.size() - 1, t)[static_cast<std::size_t>(p)];
}

SearchSpace space(std::size_t n, std::size_t tau, Model model, std::optional<std::size_t> t = std::nullopt) {
    SearchSpace s;
    s.n = n;
    s.f = kF;
    s.tau = tau;
    s.model = model;
    s.t = t;
    return s;
}

bool fabricated_in(const Scenario& s, const ReadPair& w) {
    for (const auto& script : s.scripts) {
        for (const auto& r : script.fabricate) {
            if (r.reader == w.first && r.label == w.second) {
                return true;
            }
        }
    }
    return false;
}

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    Outcome() { detail << std::boolalpha; }

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (!ok) {
                detail << "; ";
            }
            ok = false;
            detail << what;
        }
    }
};

// 1. Every tau-subset reconstructs, every (tau-1)-subset fails, and a single
// byte stays ambiguous under any tau-1 shares.
void codec(Outcome& o) {
    const auto v = Value::from_hex("00017f80feff");
    std::size_t subsets_checked = 0;
    for (std::size_t n = 1; n <= 7; ++n) {
        for (std::size_t tau = 1; tau <= n; ++tau) {
            const CodecParams p{n, tau};
            const auto blocks = split(v, Label{1, 1}, p);
            for (const auto& idx : oracle::subsets(n, tau)) {
                std::vector<Block> part;
                for (auto i : idx) {
                    part.push_back(blocks[i]);
                }
                o.require(combine(part, p) == v, "subset fails to reconstruct");
                ++subsets_checked;
            }
            if (tau == 1) {
                continue;
            }
            const auto one_byte = split(Value::from_hex("9d"), Label{1, 1}, p);
            for (const auto& idx : oracle::subsets(n, tau - 1)) {
                std::vector<Block> part;
                std::vector<std::pair<std::int64_t, std::int64_t>> pts;
                for (auto i : idx) {
                    part.push_back(blocks[i]);
                    pts.emplace_back(one_byte[i].index, one_byte[i].share[0]);
                }
                bool refused = false;
                try {
                    combine(part, p);
                } catch (const CodecError&) {
                    refused = true;
                }
                o.require(refused, "short subset accepted");
                o.require(oracle::consistent_secrets(pts, tau).size() >= 2, "short subset pins the byte");
                ++subsets_checked;
            }
        }
    }
    o.detail << (o.ok ? "" : " | ") << subsets_checked << " subsets over n<=7";
}

// 2. figure1 leaves exactly tau - 2f records of the effective read in the
// audited quorum.
void min_records(Outcome& o) {
    for (std::size_t tau : {3, 4}) {
        const auto s = load("figure1", std::nullopt, tau);
        const auto run = execute(s);
        const ReadRecord key{pid(s, "r1"), s.values.at("v")};
        const auto& attested = run.audits.back().attested;
        const auto count = attested.contains(key) ? attested.at(key).size() : 0;
        TraceFacts facts(run.trace, run.audits.back().report.invoked_at, s.cfg.tau);
        o.require(facts.providing_size(key.reader, key.label) >= s.cfg.tau, "read not effective");
        o.require(count == tau - 2 * kF, "tau=" + std::to_string(tau) + " gives " + std::to_string(count));
        o.detail << (tau == 3 ? "" : ", ") << "n=5 tau=" << tau << ": " << count << " record(s)";
    }
}

// 3. tau <= 2f: an effective read can leave no record at all.
void completeness_impossible(Outcome& o) {
    for (std::size_t n : {4, 5}) {
        const auto r = explore(space(n, 2, Model::Fast));
        bool zero = false;
        for (std::size_t t = 1; t <= n; ++t) {
            o.require(!r.holds(Property::Completeness, t), "completeness holds at n=" + std::to_string(n) +
                                                               " t=" + std::to_string(t));
            if (auto it = r.first.find({Property::Completeness, t}); it != r.first.end()) {
                zero = zero || it->second.records == 0;
            }
        }
        o.require(zero, "no zero-record counterexample at n=" + std::to_string(n));
        o.detail << (n == 4 ? "" : ", ") << "n=" << n << ": violated for t=1.." << n
                 << (zero ? " with a 0-record witness" : "");
    }
}

// 4. t <= f: one fabricated record reports a reader that never read.
void weak_accuracy_fabrication(Outcome& o) {
    const auto s = load("fabrication");
    const auto run = execute(s);
    const auto r0 = pid(s, "r0");
    const auto at1 = verdict(run, 1, Property::WeakAccuracy);
    const auto at2 = verdict(run, 2, Property::WeakAccuracy);
    TraceFacts facts(run.trace, run.audits.back().report.invoked_at, s.cfg.tau);
    o.require(!facts.invoked_read(r0), "r0 read");
    o.require(!at1.holds && at1.witness && at1.witness->first == r0, "t=1 not refuted by r0");
    o.require(at2.holds, "t=2 refuted");
    o.detail << "t=1 weak_accuracy=" << at1.holds << ", t=2 weak_accuracy=" << at2.holds;
}

// 5. n = 6: tau = 3 admits no t; tau = 4, t = 2 survives the full
// (unreduced) enumeration.
void weak_auditability(Outcome& o) {
    const std::vector<Property> cw{Property::Completeness, Property::WeakAccuracy};
    const auto low = explore(space(6, 3, Model::Fast));
    o.require(low.satisfying(cw).empty(), "tau=3 admits some t");
    auto full = space(6, 4, Model::Fast, 2);
    full.symmetry = false;
    const auto high = find_violation(full, cw);
    o.require(!high.violated, "tau=4 t=2 violated");
    o.detail << "tau=3: no t in [1,6]; tau=4 t=2: " << high.states_explored << " adversaries, "
             << (high.violated ? "violated" : "0 violations");
}

// 6. Strong accuracy alone needs t >= tau + f.
void strong_accuracy_alone(Outcome& o) {
    const auto s = load("figure2", 7, 3);
    const auto run = execute(s);
    const auto below = verdict(run, 3, Property::StrongAccuracy);
    const auto at = verdict(run, 4, Property::StrongAccuracy);
    o.require(!below.holds, "t=3 holds");
    o.require(at.holds, "t=4 fails");
    std::uint64_t states = 0;
    for (std::size_t n = 5; n <= 7; ++n) {
        const auto v = find_violation(space(n, 3, Model::Fast, 3 + kF), {Property::StrongAccuracy});
        o.require(!v.violated, "search violates at n=" + std::to_string(n));
        states += v.states_explored;
    }
    o.detail << "figure2 t=3 strong_accuracy=" << below.holds << ", t=4 strong_accuracy=" << at.holds
             << "; search n=5..7 t=4: " << states << " adversaries, no violation";
}

// 7. Fast reads: no t gives completeness and strong accuracy together, and
// the failures are witnessed by r1 and r2 respectively.
void strong_impossibility(Outcome& o) {
    std::size_t cells = 0;
    std::vector<std::string> searched;
    for (std::size_t n = 4; n <= 7; ++n) {
        for (std::size_t tau = 3; tau <= n; ++tau) {
            Scenario s;
            try {
                s = load("figure2", n, tau);
            } catch (const ScenarioError&) {
                // tau = n leaves no room for G5; the exhaustive search covers it.
                const auto v = find_violation(space(n, tau, Model::Fast),
                                              {Property::Completeness, Property::StrongAccuracy});
                o.require(v.violated, "search finds C+SA at n=tau=" + std::to_string(n));
                searched.push_back(std::to_string(n));
                continue;
            }
            const auto run = execute(s);
            const ReadPair p1{pid(s, "r1"), s.values.at("v")};
            const ReadPair p2{pid(s, "r2"), s.values.at("v")};
            for (std::size_t t = 1; t <= n; ++t) {
                const auto c = verdict(run, t, Property::Completeness);
                const auto sa = verdict(run, t, Property::StrongAccuracy);
                const auto where = " n=" + std::to_string(n) + " tau=" + std::to_string(tau) + " t=" + std::to_string(t);
                o.require(!(c.holds && sa.holds), "both hold at" + where);
                o.require(c.holds || c.witness == p1, "completeness witness is not r1 at" + where);
                o.require(sa.holds || sa.witness == p2, "strong accuracy witness is not r2 at" + where);
                ++cells;
            }
        }
    }
    o.detail << cells << " figure2 cells over n=4..7, tau=3..n-1, none satisfies both; witnesses r1/r2";
    if (!searched.empty()) {
        o.detail << "; tau=n by search at n=";
        for (std::size_t i = 0; i < searched.size(); ++i) {
            o.detail << (i == 0 ? "" : ",") << searched[i];
        }
    }
}

// 8. Generic signatures: weak accuracy at t = 1 and tau = 2f + 1, strong
// accuracy still broken by replaying a generic token.
void signed_reads(Outcome& o) {
    const auto s = load("fabrication", std::nullopt, std::nullopt, Model::Signed);
    const auto run = execute(s);
    const auto wa = verdict(run, 1, Property::WeakAccuracy);
    o.require(wa.holds, "fabrication breaks weak accuracy");

    const auto r = explore(space(5, 3, Model::Signed));
    o.require(r.holds(Property::Completeness, 1), "completeness violated at t=1");
    o.require(r.holds(Property::WeakAccuracy, 1), "weak accuracy violated at t=1");
    auto it = r.first.find({Property::StrongAccuracy, 1});
    bool replay = false;
    if (it != r.first.end()) {
        const auto& c = it->second;
        const auto& w = *c.verdict.witness;
        const auto rerun = execute(c.scenario);
        for (const auto& [k, log] : rerun.audits.back().report.collected_logs) {
            for (const auto& e : log) {
                if (e.record.reader == w.first && e.record.label == w.second && e.token && !e.token->label &&
                    e.token->reader == w.first && c.scenario.scripts[k - 1].is_faulty) {
                    replay = true;
                }
            }
        }
        replay = replay && fabricated_in(c.scenario, w);
    }
    o.require(replay, "no generic-token replay counterexample");
    o.detail << "fabrication t=1 weak_accuracy=" << wa.holds << "; search n=5 tau=3 t=1: C and WA hold over "
             << r.states_explored << " adversaries; strong accuracy broken by replay: " << replay;
}

// 9. Total order: t = f + 1 with tau = 3f + 1.
void total_order(Outcome& o) {
    const auto r = explore(space(6, 4, Model::Total));
    o.require(r.holds(Property::Completeness, 2) && r.holds(Property::StrongAccuracy, 2), "t=2 violated");
    auto it = r.first.find({Property::StrongAccuracy, 1});
    const bool fab = it != r.first.end() && fabricated_in(it->second.scenario, *it->second.verdict.witness);
    o.require(fab, "no fabrication counterexample at t=1");
    o.detail << "n=6 tau=4: t=2 passes over " << r.states_explored
             << " adversaries; t=1 fabrication counterexample: " << fab;
}

// 10. Two-round reads; specific signatures; replayed specific tokens.
void non_fast(Outcome& o) {
    const auto nf = find_violation(space(6, 4, Model::NonFast, 2), {Property::Completeness, Property::StrongAccuracy});
    o.require(!nf.violated, "non-fast tau=4 t=2 violated");
    const auto sr = find_violation(space(5, 3, Model::NonFastSigned, 1),
                                   {Property::Completeness, Property::StrongAccuracy});
    o.require(!sr.violated, "non-fast signed tau=3 t=1 violated");

    const auto s = load("token_replay");
    const auto run = execute(s);
    const ReadRecord fake{pid(s, "r1"), s.values.at("x")};
    bool presented = false;
    for (const auto& [k, log] : run.audits.back().report.collected_logs) {
        for (const auto& e : log) {
            presented = presented || (e.record == fake && e.token && e.token->label && *e.token->label != fake.label);
        }
    }
    const bool rejected = !run.audits.back().attested.contains(fake);
    o.require(presented, "replayed token not presented");
    o.require(rejected, "replayed token accepted");
    o.require(run.matched(), "token_replay expectations mismatch");
    o.detail << "non-fast n=6 tau=4 t=2: " << nf.states_explored << " adversaries, 0 violations; signed n=5 tau=3 t=1: "
             << sr.states_explored << " adversaries, 0 violations; replayed token rejected: " << rejected;
}

// 11. The bounds table at f = 1.
void table(Outcome& o) {
    BoundsOptions opt;
    opt.f = kF;
    const auto rows = table1(opt);
    std::size_t matched = 0;
    for (const auto& row : rows) {
        const auto want = expected_row(row.model, kF);
        for (std::size_t c = 0; c < want.size(); ++c) {
            if (row.cells[c] == want[c]) {
                ++matched;
            } else {
                o.require(false, std::string(model_name(row.model)) + "/" + std::string(column_name(kColumns[c])) +
                                     ": " + row.cells[c] + " vs " + want[c]);
            }
        }
    }
    o.detail << matched << "/" << rows.size() * kColumns.size() << " cells match";
}

// 12. Same scenario, same seed, same bytes.
void determinism(Outcome& o) {
    std::size_t runs = 0;
    for (const auto& entry : std::filesystem::directory_iterator(ARSIM_SCENARIO_DIR)) {
        const auto doc = read_scenario_file(entry.path().string());
        for (auto model : kAllModels) {
            Scenario s;
            try {
                s = instantiate(doc, Overrides{std::nullopt, std::nullopt, std::nullopt, model, std::nullopt});
            } catch (const ScenarioError&) {
                continue;
            }
            const auto a = report_json_lines(execute(s));
            const auto b = report_json_lines(execute(s));
            o.require(a == b, entry.path().filename().string() + " under " + std::string(model_name(model)));
            ++runs;
        }
    }
    const auto c1 = explore(space(5, 3, Model::Fast));
    const auto c2 = explore(space(5, 3, Model::Fast));
    for (const auto& [key, c] : c1.first) {
        o.require(c2.first.at(key).ordinal == c.ordinal, "search not deterministic");
        const auto a = report_json_lines(execute(c.scenario));
        o.require(a == report_json_lines(execute(c2.first.at(key).scenario)), "counterexample replay differs");
    }
    o.detail << runs << " scenario/model pairs and " << c1.first.size() << " counterexamples replayed twice";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"codec threshold and secrecy", codec},
        {"min records (figure1)", min_records},
        {"completeness impossible with tau <= 2f", completeness_impossible},
        {"weak accuracy impossible with t <= f", weak_accuracy_fabrication},
        {"weak auditability boundary at tau = 3f+1", weak_auditability},
        {"strong accuracy alone needs t >= tau+f", strong_accuracy_alone},
        {"strong impossibility under fast reads", strong_impossibility},
        {"signed reads", signed_reads},
        {"total order", total_order},
        {"non-fast reads", non_fast},
        {"bounds table at f=1", table},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cout << (o.ok ? "PASS" : "FAIL") << " #" << (i + 1) << ' ' << criteria[i].first << ": "
                  << o.detail.str() << " (" << ms.count() << " ms)" << std::endl;
        failed += o.ok ? 0 : 1;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

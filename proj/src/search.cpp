#include "arsim/search.hpp"

#include "arsim/run.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

namespace arsim {

ModelConfig SearchSpace::config(std::size_t t) const {
    ModelConfig cfg;
    cfg.n = n;
    cfg.f = f;
    cfg.tau = tau;
    cfg.t = t;
    apply_model(cfg, model);
    return cfg;
}

void SearchSpace::validate() const {
    config(1).validate();
    if (readers < 1 || readers > 2) {
        throw std::invalid_argument("the search skeleton supports one or two readers");
    }
    if (n > 7) {
        throw std::invalid_argument("exhaustive search is limited to n <= 7");
    }
    if (n < 2 * f) {
        throw std::invalid_argument("need n >= 2f so that f objects can be faulty and f left out of the quorum");
    }
    if (t && (*t < 1 || *t > n)) {
        throw std::invalid_argument("t must lie in [1, n]");
    }
}

bool SearchResult::holds_all(const std::vector<Property>& ps, std::size_t t) const {
    return std::all_of(ps.begin(), ps.end(), [&](Property p) { return holds(p, t); });
}

std::vector<std::size_t> SearchResult::satisfying(const std::vector<Property>& ps) const {
    std::vector<std::size_t> out;
    for (auto t : thresholds) {
        if (holds_all(ps, t)) {
            out.push_back(t);
        }
    }
    return out;
}

namespace {

struct Global {
    std::vector<ReaderRole> roles;
    bool has_x = false;
    bool x_before_reads = false;
    std::vector<bool> request_x;
};

std::vector<Global> globals(const SearchSpace& space) {
    const bool total = space.config(1).total_order;
    const bool nonfast = space.config(1).read_mode == ReadMode::NonFast;
    std::vector<std::vector<ReaderRole>> role_sets{{}};
    for (std::size_t r = 0; r < space.readers; ++r) {
        std::vector<std::vector<ReaderRole>> next;
        for (const auto& prefix : role_sets) {
            for (auto role : {ReaderRole::Absent, ReaderRole::Correct, ReaderRole::Faulty}) {
                auto roles = prefix;
                roles.push_back(role);
                next.push_back(std::move(roles));
            }
        }
        role_sets = std::move(next);
    }

    std::vector<Global> out;
    for (const auto& roles : role_sets) {
        for (bool has_x : {false, true}) {
            std::vector<bool> phases = total && has_x ? std::vector<bool>{false, true} : std::vector<bool>{false};
            for (bool before : phases) {
                std::vector<std::vector<bool>> requests{{}};
                for (std::size_t r = 0; r < roles.size(); ++r) {
                    const bool choice = nonfast && has_x && roles[r] == ReaderRole::Faulty;
                    std::vector<std::vector<bool>> next;
                    for (const auto& prefix : requests) {
                        for (bool x : choice ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
                            auto req = prefix;
                            req.push_back(x);
                            next.push_back(std::move(req));
                        }
                    }
                    requests = std::move(next);
                }
                for (const auto& req : requests) {
                    out.push_back({roles, has_x, before, req});
                }
            }
        }
    }
    return out;
}

struct Types {
    std::vector<ObjectChoice> correct;
    std::vector<ObjectChoice> faulty;
};

Types types_for(const SearchSpace& space, const Global& g) {
    const bool total = space.config(1).total_order;
    const bool per_object_x = g.has_x && !total;
    const bool any_reader = std::any_of(g.roles.begin(), g.roles.end(),
                                        [](ReaderRole r) { return r != ReaderRole::Absent; });

    std::vector<ObjectChoice> correct;
    for (bool early : per_object_x ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
        std::vector<std::vector<bool>> targets{{}};
        for (auto role : g.roles) {
            std::vector<std::vector<bool>> next;
            for (const auto& prefix : targets) {
                for (bool hit : role == ReaderRole::Faulty ? std::vector<bool>{true, false} : std::vector<bool>{true}) {
                    auto v = prefix;
                    v.push_back(hit);
                    next.push_back(std::move(v));
                }
            }
            targets = std::move(next);
        }
        for (const auto& tv : targets) {
            ObjectChoice c;
            c.early = early;
            c.targeted = tv;
            correct.push_back(c);
        }
    }

    std::vector<ObjectChoice> faulty;
    for (const auto& base : correct) {
        for (bool omit_blocks : any_reader ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
            for (bool omit_records : {false, true}) {
                for (bool fabricate : {false, true}) {
                    auto c = base;
                    c.faulty = true;
                    c.omit_blocks = omit_blocks;
                    c.omit_records = omit_records;
                    c.fabricate = fabricate;
                    faulty.push_back(c);
                }
            }
        }
    }
    return {std::move(correct), std::move(faulty)};
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

std::uint64_t multisets(std::uint64_t types, std::uint64_t size) {
    return size == 0 ? 1 : binom(types + size - 1, size);
}

std::uint64_t factorial(std::uint64_t n) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

std::uint64_t power(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e-- > 0) {
        r *= b;
    }
    return r;
}

struct ObjectClass {
    std::size_t size;
    const std::vector<ObjectChoice>* types;
    bool in_quorum;
};

/// The four classes for `b` faulty objects outside the quorum.
std::vector<ObjectClass> classes(const SearchSpace& s, const Types& types, std::size_t b) {
    return {{s.f - b, &types.faulty, true},
            {b, &types.faulty, false},
            {s.n - 2 * s.f + b, &types.correct, true},
            {s.f - b, &types.correct, false}};
}

class Enumerator {
public:
    Enumerator(const SearchSpace& space, const std::function<void(std::uint64_t, const Adversary&)>& visit)
        : space_(space), visit_(visit) {}

    std::uint64_t run() {
        for (const auto& g : globals(space_)) {
            const auto types = types_for(space_, g);
            adv_.roles = g.roles;
            adv_.has_x = g.has_x;
            adv_.x_before_reads = g.x_before_reads;
            adv_.request_x = g.request_x;
            for (std::size_t b = 0; b <= space_.f; ++b) {
                classes_ = classes(space_, types, b);
                adv_.objects.assign(space_.n, ObjectChoice{});
                if (space_.symmetry) {
                    symmetric(0, 0, 0, 0);
                } else {
                    remaining_.clear();
                    for (const auto& c : classes_) {
                        remaining_.push_back(c.size);
                    }
                    full(0);
                }
            }
        }
        return ordinal_;
    }

private:
    void emit() { visit_(ordinal_++, adv_); }

    void place(std::size_t pos, const ObjectClass& c, std::size_t type) {
        auto& o = adv_.objects[pos];
        o = (*c.types)[type];
        o.in_quorum = c.in_quorum;
    }

    // Nondecreasing type indices within each class; classes laid out in order.
    void symmetric(std::size_t cls, std::size_t taken, std::size_t min_type, std::size_t pos) {
        if (cls == classes_.size()) {
            emit();
            return;
        }
        const auto& c = classes_[cls];
        if (taken == c.size) {
            symmetric(cls + 1, 0, 0, pos);
            return;
        }
        for (std::size_t type = min_type; type < c.types->size(); ++type) {
            place(pos, c, type);
            symmetric(cls, taken + 1, type, pos + 1);
        }
    }

    void full(std::size_t pos) {
        if (pos == space_.n) {
            emit();
            return;
        }
        for (std::size_t cls = 0; cls < classes_.size(); ++cls) {
            if (remaining_[cls] == 0) {
                continue;
            }
            --remaining_[cls];
            for (std::size_t type = 0; type < classes_[cls].types->size(); ++type) {
                place(pos, classes_[cls], type);
                full(pos + 1);
            }
            ++remaining_[cls];
        }
    }

    const SearchSpace& space_;
    const std::function<void(std::uint64_t, const Adversary&)>& visit_;
    Adversary adv_;
    std::vector<ObjectClass> classes_;
    std::vector<std::size_t> remaining_;
    std::uint64_t ordinal_ = 0;
};

}  // namespace

std::uint64_t closed_form_count(const SearchSpace& space) {
    std::uint64_t total = 0;
    for (const auto& g : globals(space)) {
        const auto types = types_for(space, g);
        const std::uint64_t bf = types.faulty.size();
        const std::uint64_t bc = types.correct.size();
        for (std::size_t b = 0; b <= space.f; ++b) {
            const std::uint64_t fi = space.f - b;
            const std::uint64_t fo = b;
            const std::uint64_t ci = space.n - 2 * space.f + b;
            const std::uint64_t co = space.f - b;
            if (space.symmetry) {
                total += multisets(bf, fi) * multisets(bf, fo) * multisets(bc, ci) * multisets(bc, co);
            } else {
                const auto arrangements =
                    factorial(space.n) / (factorial(fi) * factorial(fo) * factorial(ci) * factorial(co));
                total += arrangements * power(bf, space.f) * power(bc, space.n - space.f);
            }
        }
    }
    return total;
}

std::uint64_t enumerate(const SearchSpace& space, const std::function<void(std::uint64_t, const Adversary&)>& visit) {
    space.validate();
    return Enumerator(space, visit).run();
}

Scenario build_scenario(const SearchSpace& space, const Adversary& adv, std::size_t t) {
    Scenario s;
    s.name = "search";
    s.cfg = space.config(t);
    s.weak_accuracy = space.weak_accuracy;

    std::vector<ProcessInfo> infos;
    infos.push_back({1, "w", Role::Writer, true});
    infos.push_back({2, kBogusWriter, Role::Writer, true});
    std::vector<ProcessId> readers;
    for (std::size_t r = 0; r < adv.roles.size(); ++r) {
        const auto id = static_cast<ProcessId>(infos.size() + 1);
        infos.push_back({id, "r" + std::to_string(r + 1), Role::Reader, adv.roles[r] != ReaderRole::Faulty});
        readers.push_back(id);
    }
    const auto auditor = static_cast<ProcessId>(infos.size() + 1);
    infos.push_back({auditor, "a", Role::Auditor, true});
    s.processes = ProcessTable(std::move(infos));

    const Label v{1, 1};
    const Label x{1, 2};
    const Label bogus{2, 1};
    s.values["v"] = v;
    if (adv.has_x) {
        s.values["x"] = x;
    }
    s.values[kBogusWriter] = bogus;

    ObjectSet all;
    ObjectSet early;
    ObjectSet late;
    ObjectSet quorum;
    s.scripts.assign(space.n, FaultScript{});
    for (std::size_t i = 0; i < space.n; ++i) {
        const auto k = static_cast<ObjectIndex>(i + 1);
        const auto& o = adv.objects[i];
        all.push_back(k);
        (o.early ? early : late).push_back(k);
        if (o.in_quorum) {
            quorum.push_back(k);
        }
        auto& script = s.scripts[i];
        script.is_faulty = o.faulty;
        if (!o.faulty) {
            continue;
        }
        script.omit_records_to_audit = o.omit_records;
        if (o.omit_blocks) {
            for (std::size_t r = 0; r < readers.size(); ++r) {
                if (adv.roles[r] != ReaderRole::Absent) {
                    script.omit_block_to.push_back({readers[r], std::nullopt});
                }
            }
        }
        if (o.fabricate) {
            for (auto r : readers) {
                script.fabricate.push_back({r, v});
                if (adv.has_x) {
                    script.fabricate.push_back({r, x});
                }
                script.fabricate.push_back({r, bogus});
            }
        }
    }

    const Value payload_v = Value::from_hex("5a");
    const Value payload_x = Value::from_hex("c3");
    s.steps.emplace_back(WriteStep{1, "v", payload_v, v, all, false});
    if (adv.has_x) {
        if (s.cfg.total_order) {
            if (adv.x_before_reads) {
                s.steps.emplace_back(WriteStep{1, "x", payload_x, x, all, false});
            }
        } else {
            s.steps.emplace_back(WriteStep{1, "x", payload_x, x, early, false});
        }
    }
    for (std::size_t r = 0; r < readers.size(); ++r) {
        if (adv.roles[r] == ReaderRole::Absent) {
            continue;
        }
        ReadStep read;
        read.reader = readers[r];
        if (adv.roles[r] == ReaderRole::Faulty) {
            for (std::size_t i = 0; i < space.n; ++i) {
                if (adv.objects[i].targeted[r]) {
                    read.targets.push_back(static_cast<ObjectIndex>(i + 1));
                }
            }
            if (s.cfg.read_mode == ReadMode::NonFast) {
                read.forced_label = adv.request_x[r] ? x : v;
            }
        } else {
            read.targets = all;
        }
        s.steps.emplace_back(std::move(read));
    }
    if (adv.has_x) {
        if (s.cfg.total_order) {
            if (!adv.x_before_reads) {
                s.steps.emplace_back(WriteStep{1, "x", payload_x, x, all, false});
            }
        } else if (!late.empty()) {
            s.steps.emplace_back(DeliverStep{std::string("x"), std::nullopt, late});
        }
    }
    s.steps.emplace_back(AuditStep{auditor, quorum});
    return s;
}

SearchResult explore(const SearchSpace& space) {
    space.validate();
    const auto total = closed_form_count(space);
    if (total > space.cap) {
        throw SearchSpaceTooLarge("search space has " + std::to_string(total) +
                                  " adversaries, above the cap of " + std::to_string(space.cap));
    }

    SearchResult result;
    if (space.t) {
        result.thresholds = {*space.t};
    } else {
        for (std::size_t t = 1; t <= space.n; ++t) {
            result.thresholds.push_back(t);
        }
    }

    unsigned workers = space.workers != 0 ? space.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(total, 1)));

    std::mutex merge_lock;
    std::uint64_t explored = 0;
    auto work = [&](unsigned id) {
        std::map<std::pair<Property, std::size_t>, Counterexample> local;
        std::uint64_t count = 0;
        Enumerator(space, [&](std::uint64_t ordinal, const Adversary& adv) {
            if (ordinal % workers != id) {
                return;
            }
            ++count;
            auto scenario = build_scenario(space, adv, result.thresholds.front());
            const auto run = execute(scenario);
            const auto& audit = run.audits.back();
            const TraceFacts facts(run.trace, audit.report.invoked_at, space.tau);
            for (auto t : result.thresholds) {
                const auto evidences = collect_evidences(audit.attested, t);
                for (auto p : kAllProperties) {
                    if (local.contains({p, t})) {
                        continue;
                    }
                    auto verdict = facts.check(p, evidences, space.weak_accuracy);
                    if (verdict.holds) {
                        continue;
                    }
                    Counterexample c;
                    c.ordinal = ordinal;
                    c.t = t;
                    auto it = audit.attested.find(ReadRecord{verdict.witness->first, verdict.witness->second});
                    c.records = it == audit.attested.end() ? 0 : it->second.size();
                    c.verdict = std::move(verdict);
                    c.scenario = scenario;
                    c.scenario.cfg.t = t;
                    local.emplace(std::make_pair(p, t), std::move(c));
                }
            }
        }).run();

        std::lock_guard lock(merge_lock);
        explored += count;
        for (auto& [key, c] : local) {
            auto it = result.first.find(key);
            if (it == result.first.end() || c.ordinal < it->second.ordinal) {
                result.first.insert_or_assign(key, std::move(c));
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < workers; ++id) {
            pool.emplace_back(work, id);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    result.states_explored = explored;
    return result;
}

ViolationResult find_violation(const SearchSpace& space, const std::vector<Property>& properties) {
    const auto explored = explore(space);
    ViolationResult out;
    out.states_explored = explored.states_explored;
    out.violated = explored.satisfying(properties).empty();
    if (!out.violated) {
        return out;
    }
    for (auto t : explored.thresholds) {
        const Counterexample* best = nullptr;
        for (auto p : properties) {
            auto it = explored.first.find({p, t});
            if (it != explored.first.end() && (best == nullptr || it->second.ordinal < best->ordinal)) {
                best = &it->second;
            }
        }
        out.counterexamples.emplace(t, *best);
    }
    out.counterexample = out.counterexamples.begin()->second;
    return out;
}

nlohmann::json counterexample_to_json(const Counterexample& c) {
    Scenario s = c.scenario;
    s.name = "counterexample-" + std::string(model_name(model_of(s.cfg))) + "-n" + std::to_string(s.cfg.n) +
             "-tau" + std::to_string(s.cfg.tau) + "-t" + std::to_string(c.t) + "-" +
             std::string(to_string(c.verdict.property));
    s.cfg.t = c.t;
    VerdictExpectation e;
    e.t_lo = e.t_hi = c.t;
    e.properties.push_back({c.verdict.property, false, c.verdict.witness});
    s.expect = {e};
    s.expect_records.clear();
    if (c.verdict.witness) {
        s.expect_records.push_back({c.verdict.witness->first, c.verdict.witness->second, c.records});
    }
    return scenario_to_json(s);
}

}  // namespace arsim

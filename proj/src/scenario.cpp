#include "arsim/scenario.hpp"

#include "arsim/expr.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace arsim {

using nlohmann::json;

namespace {

using Vars = std::map<std::string, std::int64_t>;

std::string at(const std::string& base, const std::string& field) {
    return base.empty() ? field : base + "." + field;
}

std::string at(const std::string& base, std::size_t index) {
    return base + "[" + std::to_string(index) + "]";
}

std::int64_t number(const json& j, const Vars& vars, const std::string& where) {
    if (j.is_number_integer()) {
        return j.get<std::int64_t>();
    }
    if (j.is_string()) {
        try {
            return eval_expr(j.get<std::string>(), vars);
        } catch (const ExprError& e) {
            throw ScenarioError(where, e.what());
        }
    }
    throw ScenarioError(where, "expected an integer or a formula string");
}

std::size_t count(const json& j, const Vars& vars, const std::string& where) {
    const auto v = number(j, vars, where);
    if (v < 0) {
        throw ScenarioError(where, "evaluates to " + std::to_string(v) + ", expected a non-negative count");
    }
    return static_cast<std::size_t>(v);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) {
        throw ScenarioError(where, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ScenarioError(at(where, key), "missing required field");
    }
    return *it;
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) {
        throw ScenarioError(where, "expected a string");
    }
    return j.get<std::string>();
}

bool flag(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return false;
    }
    if (!it->is_boolean()) {
        throw ScenarioError(at(where, key), "expected true or false");
    }
    return it->get<bool>();
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class Loader {
public:
    Loader(const json& doc, const Overrides& ov) : doc_(doc), ov_(ov) {}

    Scenario run() {
        if (!doc_.is_object()) {
            throw ScenarioError("", "scenario must be a JSON object");
        }
        s_.name = doc_.value("name", std::string("scenario"));
        config();
        seed();
        processes();
        groups();
        values();
        objects();
        steps();
        expectations();
        return std::move(s_);
    }

private:
    void config() {
        const json& c = require(doc_, "config", "");
        auto get = [&](const char* key, std::optional<std::size_t> override,
                       std::optional<std::int64_t> fallback) -> std::size_t {
            if (override) {
                vars_[key] = static_cast<std::int64_t>(*override);
                return *override;
            }
            auto it = c.find(key);
            if (it == c.end()) {
                if (!fallback) {
                    throw ScenarioError(at("config", key), "missing required field");
                }
                vars_[key] = *fallback;
                return static_cast<std::size_t>(*fallback);
            }
            auto v = count(*it, vars_, at("config", key));
            vars_[key] = static_cast<std::int64_t>(v);
            return v;
        };
        s_.cfg.f = get("f", std::nullopt, std::nullopt);
        s_.cfg.tau = get("tau", ov_.tau, std::nullopt);
        s_.cfg.n = get("n", ov_.n, std::nullopt);
        s_.cfg.t = get("t", ov_.t, 1);

        if (auto it = c.find("model"); it != c.end()) {
            auto m = parse_model(text(*it, "config.model"));
            if (!m) {
                throw ScenarioError("config.model", "unknown model '" + it->get<std::string>() + "'");
            }
            apply_model(s_.cfg, *m);
        }
        if (auto it = c.find("read_mode"); it != c.end()) {
            auto m = parse_read_mode(text(*it, "config.read_mode"));
            if (!m) {
                throw ScenarioError("config.read_mode", "expected \"fast\" or \"non_fast\"");
            }
            s_.cfg.read_mode = *m;
        }
        if (auto it = c.find("signing"); it != c.end()) {
            auto m = parse_signing(text(*it, "config.signing"));
            if (!m) {
                throw ScenarioError("config.signing", "expected \"none\", \"generic\" or \"specific\"");
            }
            s_.cfg.signing = *m;
        }
        if (c.contains("total_order")) {
            s_.cfg.total_order = flag(c, "total_order", "config");
        }
        if (ov_.model) {
            apply_model(s_.cfg, *ov_.model);
        }
        try {
            s_.cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ScenarioError("config", e.what());
        }
        if (auto it = doc_.find("weak_accuracy"); it != doc_.end()) {
            const auto mode = text(*it, "weak_accuracy");
            if (mode == "reader") {
                s_.weak_accuracy = WeakAccuracyMode::ReaderLevel;
            } else if (mode == "per_value") {
                s_.weak_accuracy = WeakAccuracyMode::PerValue;
            } else {
                throw ScenarioError("weak_accuracy", "expected \"reader\" or \"per_value\"");
            }
        }
    }

    void seed() {
        if (ov_.seed) {
            s_.seed = *ov_.seed;
        } else if (auto it = doc_.find("seed"); it != doc_.end()) {
            if (!it->is_number_unsigned()) {
                throw ScenarioError("seed", "expected a non-negative integer");
            }
            s_.seed = it->get<std::uint64_t>();
        }
    }

    void add_process(const std::string& name, Role role, bool correct, const std::string& where) {
        if (name.empty() || name == "*" || name == "all" || name == "none") {
            throw ScenarioError(where, "invalid process name '" + name + "'");
        }
        if (std::any_of(infos_.begin(), infos_.end(), [&](const ProcessInfo& p) { return p.name == name; })) {
            throw ScenarioError(where, "process '" + name + "' declared twice");
        }
        infos_.push_back({static_cast<ProcessId>(infos_.size() + 1), name, role, correct});
    }

    void processes() {
        const std::string base = "processes";
        const json& p = require(doc_, "processes", "");
        const json& writers = require(p, "writers", base);
        if (!writers.is_array()) {
            throw ScenarioError(at(base, "writers"), "expected an array of names");
        }
        for (std::size_t i = 0; i < writers.size(); ++i) {
            const auto where = at(at(base, "writers"), i);
            const auto name = text(writers[i], where);
            if (name == kBogusWriter) {
                throw ScenarioError(where, "the writer name 'bogus' is reserved");
            }
            add_process(name, Role::Writer, true, where);
        }
        add_process(kBogusWriter, Role::Writer, true, at(base, "writers"));
        const json& readers = require(p, "readers", base);
        if (!readers.is_array()) {
            throw ScenarioError(at(base, "readers"), "expected an array");
        }
        for (std::size_t i = 0; i < readers.size(); ++i) {
            const auto where = at(at(base, "readers"), i);
            const auto& r = readers[i];
            if (r.is_string()) {
                add_process(r.get<std::string>(), Role::Reader, true, where);
            } else {
                auto correct = r.contains("correct") ? flag(r, "correct", where) : true;
                add_process(text(require(r, "id", where), at(where, "id")), Role::Reader, correct, where);
            }
        }
        const auto auditor = p.contains("auditor") ? text(p.at("auditor"), at(base, "auditor")) : "a";
        add_process(auditor, Role::Auditor, true, at(base, "auditor"));
        s_.processes = ProcessTable(infos_);
    }

    ProcessId process(const json& j, Role role, const std::string& where) {
        const auto name = text(j, where);
        const auto* p = s_.processes.find(name);
        if (p == nullptr) {
            throw ScenarioError(where, "unknown process '" + name + "'");
        }
        if (p->role != role) {
            static const char* roles[] = {"writer", "reader", "auditor"};
            throw ScenarioError(where, "'" + name + "' is not a " + roles[static_cast<int>(role)]);
        }
        return p->id;
    }

    void groups() {
        auto it = doc_.find("groups");
        if (it == doc_.end()) {
            return;
        }
        if (!it->is_array()) {
            throw ScenarioError("groups", "expected an array");
        }
        ObjectIndex next = 1;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto where = at("groups", i);
            const auto& g = (*it)[i];
            Group group;
            group.name = text(require(g, "name", where), at(where, "name"));
            if (group.name == "all" || group.name == "none" ||
                group.name.find_first_of("+- ") != std::string::npos) {
                throw ScenarioError(at(where, "name"), "invalid group name '" + group.name + "'");
            }
            const auto size = number(require(g, "size", where), vars_, at(where, "size"));
            if (size < 0) {
                throw ScenarioError(at(where, "size"), "group " + group.name + " has negative size " +
                                                           std::to_string(size) + " for n=" +
                                                           std::to_string(s_.cfg.n) + ", tau=" +
                                                           std::to_string(s_.cfg.tau));
            }
            for (std::int64_t k = 0; k < size; ++k) {
                group.members.push_back(next++);
            }
            s_.groups.push_back(std::move(group));
        }
        if (next - 1 != s_.cfg.n) {
            throw ScenarioError("groups", "group sizes add up to " + std::to_string(next - 1) +
                                              " but n = " + std::to_string(s_.cfg.n));
        }
    }

    void values() {
        const json& steps = require(doc_, "steps", "");
        if (!steps.is_array()) {
            throw ScenarioError("steps", "expected an array");
        }
        std::map<ProcessId, std::uint64_t> seq;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto where = at("steps", i);
            if (text(require(steps[i], "op", where), at(where, "op")) != "write") {
                continue;
            }
            const auto writer = process(require(steps[i], "writer", where), Role::Writer, at(where, "writer"));
            if (writer == s_.processes.find(kBogusWriter)->id) {
                throw ScenarioError(at(where, "writer"), "the phantom writer cannot write");
            }
            const auto name = text(require(steps[i], "value", where), at(where, "value"));
            if (name == kBogusWriter || name == "*" || s_.values.contains(name)) {
                throw ScenarioError(at(where, "value"), "value name '" + name + "' is reserved or reused");
            }
            s_.values[name] = Label{writer, ++seq[writer]};
        }
        s_.values[kBogusWriter] = Label{s_.processes.find(kBogusWriter)->id, 1};
    }

    Label value(const json& j, const std::string& where) {
        const auto name = text(j, where);
        auto it = s_.values.find(name);
        if (it == s_.values.end()) {
            throw ScenarioError(where, "unknown value '" + name + "'");
        }
        return it->second;
    }

    ObjectSet set(const json& j, const std::string& where) {
        return expand_set(j, s_.groups, s_.cfg.n, where);
    }

    void objects() {
        s_.scripts.assign(s_.cfg.n, FaultScript{});
        auto it = doc_.find("objects");
        if (it == doc_.end()) {
            return;
        }
        if (!it->is_array()) {
            throw ScenarioError("objects", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto where = at("objects", i);
            const auto& o = (*it)[i];
            const auto members = set(require(o, "select", where), at(where, "select"));
            for (auto k : members) {
                auto& script = s_.scripts[k - 1];
                script.is_faulty = script.is_faulty || flag(o, "faulty", where);
                script.omit_records_to_audit =
                    script.omit_records_to_audit || flag(o, "omit_records_to_audit", where);
                if (auto om = o.find("omit_block_to"); om != o.end()) {
                    for (std::size_t r = 0; r < om->size(); ++r) {
                        const auto rw = at(at(where, "omit_block_to"), r);
                        OmitRule rule;
                        rule.reader = process(require((*om)[r], "reader", rw), Role::Reader, at(rw, "reader"));
                        const auto v = (*om)[r].value("value", std::string("*"));
                        if (v != "*") {
                            rule.label = value((*om)[r].at("value"), at(rw, "value"));
                        }
                        script.omit_block_to.push_back(rule);
                    }
                }
                if (auto fab = o.find("fabricate"); fab != o.end()) {
                    for (std::size_t r = 0; r < fab->size(); ++r) {
                        const auto rw = at(at(where, "fabricate"), r);
                        ReadRecord record;
                        record.reader = process(require((*fab)[r], "reader", rw), Role::Reader, at(rw, "reader"));
                        record.label = value(require((*fab)[r], "value", rw), at(rw, "value"));
                        script.fabricate.push_back(record);
                    }
                }
                if (auto cr = o.find("crash_after_event"); cr != o.end()) {
                    script.crash_after_event = count(*cr, vars_, at(where, "crash_after_event"));
                }
                if (!script.is_faulty && script.deviates()) {
                    throw ScenarioError(where, "object " + std::to_string(k) +
                                                   " deviates but is not marked faulty");
                }
            }
        }
        const auto faulty = std::count_if(s_.scripts.begin(), s_.scripts.end(),
                                          [](const FaultScript& f) { return f.is_faulty; });
        if (static_cast<std::size_t>(faulty) > s_.cfg.f) {
            throw ScenarioError("objects", std::to_string(faulty) + " faulty objects exceed f = " +
                                               std::to_string(s_.cfg.f));
        }
    }

    void steps() {
        const json& steps = doc_.at("steps");
        const ProcessId auditor = s_.processes.all().back().id;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto where = at("steps", i);
            const auto& j = steps[i];
            const auto op = text(j.at("op"), at(where, "op"));
            if (op == "write") {
                WriteStep w;
                w.writer = process(j.at("writer"), Role::Writer, at(where, "writer"));
                w.value_name = j.at("value").get<std::string>();
                w.label = s_.values.at(w.value_name);
                try {
                    w.value = Value::from_hex(text(require(j, "payload", where), at(where, "payload")));
                } catch (const ScenarioError&) {
                    throw;
                } catch (const std::exception& e) {
                    throw ScenarioError(at(where, "payload"), e.what());
                }
                w.deliver = set(j.value("deliver", json("all")), at(where, "deliver"));
                w.crash = flag(j, "crash", where);
                if (s_.cfg.total_order && (w.crash || w.deliver.size() != s_.cfg.n)) {
                    throw ScenarioError(where, "total order requires every write to reach all objects");
                }
                s_.steps.emplace_back(std::move(w));
            } else if (op == "read") {
                ReadStep r;
                r.reader = process(require(j, "reader", where), Role::Reader, at(where, "reader"));
                r.targets = set(j.value("targets", json("all")), at(where, "targets"));
                if (j.contains("deliver")) {
                    r.deliver = set(j.at("deliver"), at(where, "deliver"));
                }
                if (j.contains("round1")) {
                    r.round1 = set(j.at("round1"), at(where, "round1"));
                }
                if (j.contains("label")) {
                    r.forced_label = value(j.at("label"), at(where, "label"));
                }
                if (j.contains("retries")) {
                    r.retries = static_cast<unsigned>(count(j.at("retries"), vars_, at(where, "retries")));
                }
                const bool nonfast = s_.cfg.read_mode == ReadMode::NonFast;
                if (!nonfast && (r.round1 || r.forced_label || r.retries != 0)) {
                    throw ScenarioError(where, "round1, label and retries apply to two-round reads only");
                }
                if (r.forced_label && s_.processes.is_correct(r.reader)) {
                    throw ScenarioError(at(where, "label"), "only faulty readers may skip label discovery");
                }
                s_.steps.emplace_back(std::move(r));
            } else if (op == "deliver") {
                DeliverStep d;
                if (j.contains("write")) {
                    const auto name = text(j.at("write"), at(where, "write"));
                    if (!s_.values.contains(name) || name == kBogusWriter) {
                        throw ScenarioError(at(where, "write"), "unknown value '" + name + "'");
                    }
                    d.write_value = name;
                } else if (j.contains("reader")) {
                    d.reader = process(j.at("reader"), Role::Reader, at(where, "reader"));
                } else {
                    throw ScenarioError(where, "deliver needs either \"write\" or \"reader\"");
                }
                d.objects = set(require(j, "objects", where), at(where, "objects"));
                s_.steps.emplace_back(std::move(d));
            } else if (op == "audit") {
                AuditStep a;
                a.auditor = j.contains("auditor") ? process(j.at("auditor"), Role::Auditor, at(where, "auditor"))
                                                  : auditor;
                if (j.contains("quorum")) {
                    a.quorum = set(j.at("quorum"), at(where, "quorum"));
                    if (a.quorum->size() != s_.cfg.quorum_size()) {
                        throw ScenarioError(at(where, "quorum"),
                                            "auditing quorum has " + std::to_string(a.quorum->size()) +
                                                " objects, expected n - f = " +
                                                std::to_string(s_.cfg.quorum_size()));
                    }
                }
                s_.steps.emplace_back(std::move(a));
            } else {
                throw ScenarioError(at(where, "op"), "unknown op '" + op + "'");
            }
        }
        const bool audited = std::any_of(s_.steps.begin(), s_.steps.end(),
                                         [](const Step& st) { return std::holds_alternative<AuditStep>(st); });
        if (!audited && (doc_.contains("expect") || doc_.contains("expect_records"))) {
            throw ScenarioError("steps", "expectations need at least one audit step");
        }
    }

    ReadPair pair(const json& j, const std::string& where) {
        const auto* p = s_.processes.find(text(require(j, "reader", where), at(where, "reader")));
        if (p == nullptr || p->role != Role::Reader) {
            throw ScenarioError(at(where, "reader"), "unknown reader");
        }
        return {p->id, value(require(j, "value", where), at(where, "value"))};
    }

    std::pair<std::size_t, std::size_t> t_range(const json& e, const std::string& where) {
        auto it = e.find("t");
        if (it == e.end()) {
            return {s_.cfg.t, s_.cfg.t};
        }
        std::int64_t lo = 0;
        std::int64_t hi = 0;
        if (it->is_string() && it->get<std::string>().find("..") != std::string::npos) {
            const auto str = it->get<std::string>();
            const auto dots = str.find("..");
            lo = number(json(str.substr(0, dots)), vars_, at(where, "t"));
            hi = number(json(str.substr(dots + 2)), vars_, at(where, "t"));
        } else {
            lo = hi = number(*it, vars_, at(where, "t"));
        }
        lo = std::max<std::int64_t>(lo, 1);
        hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(s_.cfg.n));
        if (lo > hi) {
            return {1, 0};
        }
        return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
    }

    void expectations() {
        if (auto it = doc_.find("expect"); it != doc_.end()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const auto where = at("expect", i);
                const auto& e = (*it)[i];
                if (auto models = e.find("models"); models != e.end()) {
                    bool applies = false;
                    for (std::size_t m = 0; m < models->size(); ++m) {
                        const auto name = text((*models)[m], at(at(where, "models"), m));
                        auto model = parse_model(name);
                        if (!model) {
                            throw ScenarioError(at(at(where, "models"), m), "unknown model '" + name + "'");
                        }
                        applies = applies || *model == model_of(s_.cfg);
                    }
                    if (!applies) {
                        continue;
                    }
                }
                VerdictExpectation ve;
                std::tie(ve.t_lo, ve.t_hi) = t_range(e, where);
                for (auto p : kAllProperties) {
                    const std::string key(to_string(p));
                    auto pe = e.find(key);
                    if (pe == e.end()) {
                        continue;
                    }
                    PropertyExpectation x;
                    x.property = p;
                    if (pe->is_boolean()) {
                        x.holds = pe->get<bool>();
                    } else {
                        x.holds = flag(*pe, "holds", at(where, key));
                        if (pe->contains("witness")) {
                            x.witness = pair(pe->at("witness"), at(at(where, key), "witness"));
                        }
                    }
                    ve.properties.push_back(x);
                }
                if (ve.properties.empty()) {
                    throw ScenarioError(where, "expectation names no property");
                }
                s_.expect.push_back(std::move(ve));
            }
        }
        if (auto it = doc_.find("expect_records"); it != doc_.end()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const auto where = at("expect_records", i);
                auto [reader, label] = pair((*it)[i], where);
                s_.expect_records.push_back(
                    {reader, label, count(require((*it)[i], "count", where), vars_, at(where, "count"))});
            }
        }
        if (auto it = doc_.find("expect_effective"); it != doc_.end()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const auto where = at("expect_effective", i);
                auto [reader, label] = pair((*it)[i], where);
                s_.expect_effective.push_back({reader, label, flag((*it)[i], "effective", where)});
            }
        }
    }

    const json& doc_;
    const Overrides& ov_;
    Scenario s_;
    Vars vars_;
    std::vector<ProcessInfo> infos_;
};

}  // namespace

ObjectSet expand_set(const json& expr, const std::vector<Group>& groups, std::size_t n,
                     const std::string& where) {
    auto all = [&] {
        ObjectSet out(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = static_cast<ObjectIndex>(k + 1);
        }
        return out;
    };
    auto index = [&](std::int64_t k) -> ObjectIndex {
        if (k < 1 || static_cast<std::size_t>(k) > n) {
            throw ScenarioError(where, "object " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
        }
        return static_cast<ObjectIndex>(k);
    };

    std::set<ObjectIndex> out;
    if (expr.is_number_integer()) {
        out.insert(index(expr.get<std::int64_t>()));
    } else if (expr.is_array()) {
        for (const auto& item : expr) {
            for (auto k : expand_set(item, groups, n, where)) {
                out.insert(k);
            }
        }
    } else if (expr.is_string()) {
        const auto s = expr.get<std::string>();
        std::size_t pos = 0;
        char op = '+';
        while (pos <= s.size()) {
            auto next = s.find_first_of("+-", pos);
            if (next == std::string::npos) {
                next = s.size();
            }
            std::string term = s.substr(pos, next - pos);
            term.erase(0, term.find_first_not_of(' '));
            term.erase(term.find_last_not_of(' ') + 1);
            ObjectSet members;
            if (term == "all") {
                members = all();
            } else if (term == "none") {
            } else if (!term.empty() && std::all_of(term.begin(), term.end(), ::isdigit)) {
                members.push_back(index(std::stoll(term)));
            } else {
                auto g = std::find_if(groups.begin(), groups.end(), [&](const Group& gr) { return gr.name == term; });
                if (g == groups.end()) {
                    throw ScenarioError(where, "unknown group or set term '" + term + "' in '" + s + "'");
                }
                members = g->members;
            }
            for (auto k : members) {
                if (op == '+') {
                    out.insert(k);
                } else {
                    out.erase(k);
                }
            }
            if (next >= s.size()) {
                break;
            }
            op = s[next];
            pos = next + 1;
        }
    } else {
        throw ScenarioError(where, "expected an object set (\"G1+G2\", \"all\", an index, or an array)");
    }
    return ObjectSet(out.begin(), out.end());
}

json parse_scenario_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        if (auto p = what.find("syntax error"); p != std::string::npos) {
            what = what.substr(p);
        }
        throw ScenarioError("line " + std::to_string(line) + ", column " + std::to_string(col), what);
    }
}

json read_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(path, "cannot open scenario file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario_text(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

Scenario instantiate(const json& doc, const Overrides& overrides) {
    return Loader(doc, overrides).run();
}

Scenario load_scenario(const std::string& path, const Overrides& overrides) {
    return instantiate(read_scenario_file(path), overrides);
}

json scenario_to_json(const Scenario& s) {
    const auto& names = s.processes;
    auto set_json = [](const ObjectSet& objects) { return json(objects); };
    auto value_name = [&](const Label& label) {
        for (const auto& [name, l] : s.values) {
            if (l == label) {
                return name;
            }
        }
        return names.label_name(label);
    };

    json j;
    j["name"] = s.name;
    j["config"] = {{"n", s.cfg.n},
                   {"f", s.cfg.f},
                   {"tau", s.cfg.tau},
                   {"t", s.cfg.t},
                   {"read_mode", to_string(s.cfg.read_mode)},
                   {"signing", to_string(s.cfg.signing)},
                   {"total_order", s.cfg.total_order}};
    j["seed"] = s.seed;
    if (s.weak_accuracy == WeakAccuracyMode::PerValue) {
        j["weak_accuracy"] = "per_value";
    }

    json writers = json::array();
    json readers = json::array();
    std::string auditor = "a";
    for (const auto& p : names.all()) {
        if (p.role == Role::Writer && p.name != kBogusWriter) {
            writers.push_back(p.name);
        } else if (p.role == Role::Reader) {
            readers.push_back({{"id", p.name}, {"correct", p.correct}});
        } else if (p.role == Role::Auditor) {
            auditor = p.name;
        }
    }
    j["processes"] = {{"writers", writers}, {"readers", readers}, {"auditor", auditor}};

    json objects = json::array();
    for (std::size_t k = 0; k < s.scripts.size(); ++k) {
        const auto& f = s.scripts[k];
        if (!f.is_faulty) {
            continue;
        }
        json o = {{"select", k + 1}, {"faulty", true}};
        if (f.omit_records_to_audit) {
            o["omit_records_to_audit"] = true;
        }
        if (!f.omit_block_to.empty()) {
            json rules = json::array();
            for (const auto& r : f.omit_block_to) {
                rules.push_back({{"reader", names.name(r.reader)}, {"value", r.label ? value_name(*r.label) : "*"}});
            }
            o["omit_block_to"] = rules;
        }
        if (!f.fabricate.empty()) {
            json recs = json::array();
            for (const auto& r : f.fabricate) {
                recs.push_back({{"reader", names.name(r.reader)}, {"value", value_name(r.label)}});
            }
            o["fabricate"] = recs;
        }
        if (f.crash_after_event) {
            o["crash_after_event"] = *f.crash_after_event;
        }
        objects.push_back(o);
    }
    j["objects"] = objects;

    json steps = json::array();
    for (const auto& step : s.steps) {
        if (const auto* w = std::get_if<WriteStep>(&step)) {
            json o = {{"op", "write"},
                      {"writer", names.name(w->writer)},
                      {"value", w->value_name},
                      {"payload", w->value.to_hex()},
                      {"deliver", set_json(w->deliver)}};
            if (w->crash) {
                o["crash"] = true;
            }
            steps.push_back(o);
        } else if (const auto* r = std::get_if<ReadStep>(&step)) {
            json o = {{"op", "read"}, {"reader", names.name(r->reader)}, {"targets", set_json(r->targets)}};
            if (r->deliver) {
                o["deliver"] = set_json(*r->deliver);
            }
            if (r->round1) {
                o["round1"] = set_json(*r->round1);
            }
            if (r->forced_label) {
                o["label"] = value_name(*r->forced_label);
            }
            if (r->retries != 0) {
                o["retries"] = r->retries;
            }
            steps.push_back(o);
        } else if (const auto* d = std::get_if<DeliverStep>(&step)) {
            json o = {{"op", "deliver"}, {"objects", set_json(d->objects)}};
            if (d->write_value) {
                o["write"] = *d->write_value;
            } else {
                o["reader"] = names.name(*d->reader);
            }
            steps.push_back(o);
        } else if (const auto* a = std::get_if<AuditStep>(&step)) {
            json o = {{"op", "audit"}, {"auditor", names.name(a->auditor)}};
            if (a->quorum) {
                o["quorum"] = set_json(*a->quorum);
            }
            steps.push_back(o);
        }
    }
    j["steps"] = steps;

    auto pair_json = [&](const ReadPair& p) {
        return json{{"reader", names.name(p.first)}, {"value", value_name(p.second)}};
    };
    if (!s.expect.empty()) {
        json expect = json::array();
        for (const auto& e : s.expect) {
            json o;
            o["t"] = e.t_lo == e.t_hi ? json(e.t_lo)
                                      : json(std::to_string(e.t_lo) + ".." + std::to_string(e.t_hi));
            for (const auto& p : e.properties) {
                if (p.witness) {
                    o[std::string(to_string(p.property))] = {{"holds", p.holds}, {"witness", pair_json(*p.witness)}};
                } else {
                    o[std::string(to_string(p.property))] = p.holds;
                }
            }
            expect.push_back(o);
        }
        j["expect"] = expect;
    }
    if (!s.expect_records.empty()) {
        json recs = json::array();
        for (const auto& r : s.expect_records) {
            auto o = pair_json({r.reader, r.label});
            o["count"] = r.count;
            recs.push_back(o);
        }
        j["expect_records"] = recs;
    }
    if (!s.expect_effective.empty()) {
        json effs = json::array();
        for (const auto& r : s.expect_effective) {
            auto o = pair_json({r.reader, r.label});
            o["effective"] = r.effective;
            effs.push_back(o);
        }
        j["expect_effective"] = effs;
    }
    return j;
}

}  // namespace arsim

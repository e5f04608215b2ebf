#include "arsim/run.hpp"

#include "arsim/emulation.hpp"

#include <algorithm>
#include <ostream>

namespace arsim {

using nlohmann::json;

bool RunReport::matched() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

namespace {

std::string pair_name(const ReadPair& p, const ProcessTable& names) {
    return names.name(p.first) + "/" + names.label_name(p.second);
}

std::string verdict_text(bool holds, const std::optional<ReadPair>& witness, const ProcessTable& names) {
    std::string s = holds ? "holds" : "violated";
    if (witness) {
        s += " (" + pair_name(*witness, names) + ")";
    }
    return s;
}

void evaluate(const Scenario& s, RunReport& run) {
    if (run.audits.empty()) {
        return;
    }
    const auto& last = run.audits.back();
    const auto& names = run.trace.processes();
    const TraceFacts facts(run.trace, last.report.invoked_at, s.cfg.tau);

    for (const auto& e : s.expect) {
        for (std::size_t t = e.t_lo; t <= e.t_hi; ++t) {
            const auto evidences = collect_evidences(last.attested, t);
            for (const auto& pe : e.properties) {
                const auto v = facts.check(pe.property, evidences, s.weak_accuracy);
                CheckResult c;
                c.kind = "verdict";
                c.t = t;
                c.subject = std::string(to_string(pe.property));
                c.expected = verdict_text(pe.holds, pe.witness, names);
                c.actual = verdict_text(v.holds, pe.witness ? v.witness : std::nullopt, names);
                c.ok = v.holds == pe.holds && (!pe.witness || v.witness == pe.witness);
                run.checks.push_back(std::move(c));
            }
        }
    }
    for (const auto& r : s.expect_records) {
        auto it = last.attested.find(ReadRecord{r.reader, r.label});
        const std::size_t got = it == last.attested.end() ? 0 : it->second.size();
        run.checks.push_back({"records", 0, pair_name({r.reader, r.label}, names), std::to_string(r.count),
                              std::to_string(got), got == r.count});
    }
    const auto& effective = facts.effective();
    for (const auto& r : s.expect_effective) {
        const bool got = std::find(effective.begin(), effective.end(), ReadPair{r.reader, r.label}) !=
                         effective.end();
        run.checks.push_back({"effective", 0, pair_name({r.reader, r.label}, names),
                              r.effective ? "true" : "false", got ? "true" : "false", got == r.effective});
    }
}

}  // namespace

RunReport execute(const Scenario& s) {
    Simulation sim(s.cfg, s.scripts, s.processes, s.seed);
    std::map<std::string, OpId> writes;
    std::map<ProcessId, OpId> reads;
    std::vector<AuditRun> audits;

    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        try {
            const auto& step = s.steps[i];
            if (const auto* w = std::get_if<WriteStep>(&step)) {
                writes[w->value_name] = sim.a_write(w->writer, w->value, {w->deliver, w->crash}).op;
            } else if (const auto* r = std::get_if<ReadStep>(&step)) {
                if (s.cfg.read_mode == ReadMode::Fast) {
                    sim.a_read_fast(r->reader, r->targets, r->deliver);
                } else {
                    NonFastSchedule ns;
                    ns.targets = r->targets;
                    ns.round1 = r->round1;
                    ns.deliver = r->deliver;
                    ns.forced_label = r->forced_label;
                    ns.retries = r->retries;
                    sim.a_read_nonfast(r->reader, ns);
                }
                reads[r->reader] = sim.last_op();
            } else if (const auto* d = std::get_if<DeliverStep>(&step)) {
                if (d->write_value) {
                    auto it = writes.find(*d->write_value);
                    if (it == writes.end()) {
                        throw std::invalid_argument("write of '" + *d->write_value + "' has not been invoked yet");
                    }
                    sim.deliver_write(it->second, d->objects);
                } else {
                    auto it = reads.find(*d->reader);
                    if (it == reads.end()) {
                        throw std::invalid_argument("reader has not invoked a read yet");
                    }
                    sim.deliver_read(it->second, d->objects);
                }
            } else if (const auto* a = std::get_if<AuditStep>(&step)) {
                AuditRun ar;
                ar.step = i;
                ar.report = a_audit(sim, a->auditor, a->quorum, s.cfg.t);
                ar.attested = attestations(ar.report.collected_logs, s.cfg.signing, sim.tokens());
                audits.push_back(std::move(ar));
            }
            if (s.cfg.read_mode == ReadMode::NonFast) {
                sim.step_boundary();
            }
        } catch (const SchedulerDeadlock& e) {
            throw RunError(i, std::string("deadlock: ") + e.what());
        } catch (const CodecError& e) {
            throw RunError(i, e.what());
        } catch (const std::invalid_argument& e) {
            throw RunError(i, e.what());
        }
    }

    RunReport run;
    run.scenario = s.name;
    run.cfg = s.cfg;
    run.seed = s.seed;
    run.weak_accuracy = s.weak_accuracy;
    run.trace = sim.take_trace();
    run.audits = std::move(audits);
    if (!run.audits.empty()) {
        run.verdicts = verdicts_at(run, run.audits.size() - 1, s.cfg.t);
    }
    evaluate(s, run);
    return run;
}

std::vector<PropertyVerdict> verdicts_at(const RunReport& run, std::size_t audit, std::size_t t) {
    const auto& a = run.audits.at(audit);
    const TraceFacts facts(run.trace, a.report.invoked_at, run.cfg.tau);
    const auto evidences = collect_evidences(a.attested, t);
    std::vector<PropertyVerdict> out;
    for (auto p : kAllProperties) {
        out.push_back(facts.check(p, evidences, run.weak_accuracy));
    }
    return out;
}

std::vector<std::string> report_json_lines(const RunReport& run) {
    const auto& names = run.trace.processes();
    std::vector<std::string> lines;
    lines.push_back(json{{"type", "run"},
                         {"scenario", run.scenario},
                         {"n", run.cfg.n},
                         {"f", run.cfg.f},
                         {"tau", run.cfg.tau},
                         {"t", run.cfg.t},
                         {"model", model_name(model_of(run.cfg))},
                         {"seed", run.seed}}
                        .dump());
    for (const auto& e : run.trace.events()) {
        auto j = event_to_json(e, names);
        j["type"] = "event";
        lines.push_back(j.dump());
    }
    for (std::size_t i = 0; i < run.audits.size(); ++i) {
        const auto& a = run.audits[i];
        json evidences = json::array();
        for (const auto& e : a.report.evidences) {
            evidences.push_back({{"reader", names.name(e.reader)},
                                 {"label", names.label_name(e.label)},
                                 {"objects", e.attesting_objects},
                                 {"count", e.attesting_objects.size()}});
        }
        json records = json::array();
        for (const auto& [r, objects] : a.attested) {
            records.push_back({{"reader", names.name(r.reader)}, {"label", names.label_name(r.label)}, {"objects", objects}});
        }
        lines.push_back(json{{"type", "audit"},
                             {"index", i},
                             {"step", a.step},
                             {"invoked_at", a.report.invoked_at},
                             {"quorum", a.report.quorum},
                             {"t", a.report.t},
                             {"records", records},
                             {"evidences", evidences}}
                            .dump());
    }
    for (const auto& v : run.verdicts) {
        json j{{"type", "verdict"}, {"t", run.cfg.t}, {"property", to_string(v.property)}, {"holds", v.holds}};
        if (v.witness) {
            j["witness"] = {{"reader", names.name(v.witness->first)}, {"label", names.label_name(v.witness->second)}};
        }
        lines.push_back(j.dump());
    }
    for (const auto& c : run.checks) {
        lines.push_back(json{{"type", "check"},
                             {"kind", c.kind},
                             {"t", c.t},
                             {"subject", c.subject},
                             {"expected", c.expected},
                             {"actual", c.actual},
                             {"ok", c.ok}}
                            .dump());
    }
    lines.push_back(json{{"type", "summary"}, {"checks", run.checks.size()}, {"matched", run.matched()}}.dump());
    return lines;
}

void print_report(std::ostream& out, const RunReport& run) {
    const auto& names = run.trace.processes();
    out << run.scenario << ": n=" << run.cfg.n << " f=" << run.cfg.f << " tau=" << run.cfg.tau
        << " t=" << run.cfg.t << " model=" << model_name(model_of(run.cfg)) << " seed=" << run.seed << '\n';
    out << "  events: " << run.trace.events().size() << '\n';
    for (std::size_t i = 0; i < run.audits.size(); ++i) {
        const auto& a = run.audits[i];
        out << "  audit " << i << " quorum=";
        for (std::size_t k = 0; k < a.report.quorum.size(); ++k) {
            out << (k ? "," : "") << a.report.quorum[k];
        }
        out << " evidences=" << a.report.evidences.size() << '\n';
        for (const auto& e : a.report.evidences) {
            out << "    " << format_evidence(e, names) << '\n';
        }
    }
    for (const auto& v : run.verdicts) {
        out << "  " << to_string(v.property) << ": " << verdict_text(v.holds, v.witness, names) << '\n';
    }
    std::size_t failed = 0;
    for (const auto& c : run.checks) {
        if (!c.ok) {
            ++failed;
            out << "  MISMATCH " << c.kind << ' ' << c.subject;
            if (c.kind == "verdict") {
                out << " t=" << c.t;
            }
            out << ": expected " << c.expected << ", got " << c.actual << '\n';
        }
    }
    out << "  expectations: " << (run.checks.size() - failed) << '/' << run.checks.size() << " matched\n";
}

}  // namespace arsim

#include "arsim/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace arsim {

std::string_view to_string(Property p) {
    switch (p) {
        case Property::Completeness: return "completeness";
        case Property::WeakAccuracy: return "weak_accuracy";
        case Property::StrongAccuracy: return "strong_accuracy";
    }
    return "?";
}

std::optional<Property> parse_property(std::string_view s) {
    for (auto p : kAllProperties) {
        if (to_string(p) == s) {
            return p;
        }
    }
    if (s == "weak-accuracy" || s == "wa") {
        return Property::WeakAccuracy;
    }
    if (s == "strong-accuracy" || s == "sa") {
        return Property::StrongAccuracy;
    }
    return std::nullopt;
}

namespace {

struct Scan {
    std::vector<ProvidingSet> sets;
    std::vector<ReadPair> effective;  // in the order they became effective
};

Scan scan(const ExecutionTrace& trace, std::optional<std::uint64_t> before, std::size_t tau) {
    std::set<std::pair<ObjectIndex, Label>> stored;
    std::map<ReadPair, ObjectSet> providing;
    std::vector<ReadPair> effective;
    for (const auto& e : trace.events()) {
        if (before && e.ordinal >= *before) {
            break;
        }
        if (e.kind == EventKind::Deliver && e.message == MessageKind::WriteRequest && e.label) {
            stored.emplace(e.object, *e.label);
        } else if (e.kind == EventKind::Respond && e.message == MessageKind::ReadReply && e.label) {
            if (!stored.contains({e.object, *e.label})) {
                continue;
            }
            auto& objects = providing[{e.actor, *e.label}];
            if (std::find(objects.begin(), objects.end(), e.object) != objects.end()) {
                continue;
            }
            objects.push_back(e.object);
            if (tau != 0 && objects.size() == tau) {
                effective.emplace_back(e.actor, *e.label);
            }
        }
    }
    Scan out;
    for (auto& [key, objects] : providing) {
        std::sort(objects.begin(), objects.end());
        out.sets.push_back({key.first, key.second, std::move(objects)});
    }
    out.effective = std::move(effective);
    return out;
}

}  // namespace

std::vector<ProvidingSet> providing_sets(const ExecutionTrace& trace, std::optional<std::uint64_t> before) {
    return scan(trace, before, 0).sets;
}

std::vector<ReadPair> effective_reads(const ExecutionTrace& trace, std::size_t tau,
                                      std::optional<std::uint64_t> before) {
    auto pairs = scan(trace, before, tau).effective;
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

TraceFacts::TraceFacts(const ExecutionTrace& trace, std::uint64_t audit_invoked_at, std::size_t tau)
    : processes_(&trace.processes()), tau_(tau) {
    const Event* audit = trace.at(audit_invoked_at);
    if (audit == nullptr || audit->kind != EventKind::Invoke || audit->op != OpKind::Audit) {
        throw std::invalid_argument("audit ordinal " + std::to_string(audit_invoked_at) +
                                    " is not an audit invocation in the trace");
    }
    auto s = scan(trace, audit_invoked_at, tau);
    providing_ = std::move(s.sets);
    for (const auto& p : providing_) {
        sizes_[{p.reader, p.label}] = p.objects.size();
    }
    effective_ = std::move(s.effective);
    std::sort(effective_.begin(), effective_.end());
    for (const auto& e : trace.events()) {
        if (e.ordinal >= audit_invoked_at) {
            break;
        }
        if (e.kind == EventKind::Invoke && e.op == OpKind::Read) {
            invoked_.insert(e.actor);
        }
    }
}

std::size_t TraceFacts::providing_size(ProcessId reader, const Label& label) const {
    auto it = sizes_.find({reader, label});
    return it == sizes_.end() ? 0 : it->second;
}

bool TraceFacts::correct(ProcessId reader) const {
    return processes_->is_correct(reader);
}

PropertyVerdict TraceFacts::check(Property p, const std::vector<Evidence>& evidences,
                                  WeakAccuracyMode mode) const {
    PropertyVerdict v;
    v.property = p;
    switch (p) {
        case Property::Completeness:
            for (const auto& [reader, label] : effective_) {
                auto reported = std::any_of(evidences.begin(), evidences.end(), [&](const Evidence& e) {
                    return e.reader == reader && e.label == label;
                });
                if (!reported) {
                    v.holds = false;
                    v.witness = ReadPair{reader, label};
                    return v;
                }
            }
            return v;
        case Property::WeakAccuracy:
            for (const auto& e : evidences) {
                if (!correct(e.reader)) {
                    continue;
                }
                const bool bad = mode == WeakAccuracyMode::PerValue
                                     ? providing_size(e.reader, e.label) == 0
                                     : !invoked_read(e.reader);
                if (bad) {
                    v.holds = false;
                    v.witness = ReadPair{e.reader, e.label};
                    return v;
                }
            }
            return v;
        case Property::StrongAccuracy:
            for (const auto& e : evidences) {
                if (correct(e.reader) && providing_size(e.reader, e.label) < tau_) {
                    v.holds = false;
                    v.witness = ReadPair{e.reader, e.label};
                    return v;
                }
            }
            return v;
    }
    return v;
}

PropertyVerdict check(Property p, const ExecutionTrace& trace, const AuditReport& report,
                      const ModelConfig& cfg, WeakAccuracyMode mode) {
    return TraceFacts(trace, report.invoked_at, cfg.tau).check(p, report.evidences, mode);
}

}  // namespace arsim

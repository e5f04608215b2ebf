#include "arsim/audit.hpp"

#include <algorithm>

namespace arsim {

const Evidence* AuditReport::find(ProcessId reader, const Label& label) const {
    for (const auto& e : evidences) {
        if (e.reader == reader && e.label == label) {
            return &e;
        }
    }
    return nullptr;
}

bool AuditReport::reports(ProcessId reader) const {
    return std::any_of(evidences.begin(), evidences.end(),
                       [&](const Evidence& e) { return e.reader == reader; });
}

bool verify_record(const LogEntry& entry, ObjectIndex object, const TokenRegistry& registry) {
    if (!entry.token) {
        return false;
    }
    const SignedToken& token = *entry.token;
    if (!registry.genuine(token) || token.reader != entry.record.reader) {
        return false;
    }
    if (!registry.received(object, token.nonce)) {
        return false;
    }
    return !token.label || *token.label == entry.record.label;
}

std::map<ReadRecord, ObjectSet> attestations(const std::map<ObjectIndex, std::vector<LogEntry>>& logs,
                                             Signing signing, const TokenRegistry& registry) {
    std::map<ReadRecord, ObjectSet> out;
    for (const auto& [k, log] : logs) {
        for (const auto& entry : log) {
            if (signing != Signing::None && !verify_record(entry, k, registry)) {
                continue;
            }
            auto& objects = out[entry.record];
            if (objects.empty() || objects.back() != k) {
                objects.push_back(k);
            }
        }
    }
    return out;
}

std::vector<Evidence> collect_evidences(const std::map<ReadRecord, ObjectSet>& attested, std::size_t t) {
    std::vector<Evidence> out;
    for (const auto& [record, objects] : attested) {
        if (objects.size() >= t) {
            out.push_back({record.reader, record.label, objects});
        }
    }
    return out;
}

AuditReport audit_logs(const GatheredLogs& gathered, Signing signing, const TokenRegistry& registry,
                       std::size_t t) {
    AuditReport report;
    report.quorum = gathered.quorum;
    report.collected_logs = gathered.logs;
    report.invoked_at = gathered.invoked_at;
    report.t = t;
    report.evidences = collect_evidences(attestations(gathered.logs, signing, registry), t);
    return report;
}

AuditReport a_audit(Simulation& sim, ProcessId auditor, const std::optional<ObjectSet>& quorum,
                    std::size_t t) {
    auto gathered = sim.gather_logs(auditor, quorum);
    return audit_logs(gathered, sim.config().signing, sim.tokens(), t);
}

std::string format_evidence(const Evidence& e, const ProcessTable& names) {
    std::string objects;
    for (auto k : e.attesting_objects) {
        if (!objects.empty()) {
            objects += ',';
        }
        objects += std::to_string(k);
    }
    return "reader=" + names.name(e.reader) + " label=" + names.label_name(e.label) +
           " objects=" + objects + " count=" + std::to_string(e.attesting_objects.size());
}

}  // namespace arsim

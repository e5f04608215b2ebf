#pragma once

#include "arsim/base_object.hpp"
#include "arsim/config.hpp"
#include "arsim/emulation.hpp"
#include "arsim/tokens.hpp"

#include <map>
#include <string>
#include <vector>

namespace arsim {

struct Evidence {
    ProcessId reader = 0;
    Label label;
    ObjectSet attesting_objects;  // ascending

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct AuditReport {
    std::vector<Evidence> evidences;  // ordered by (reader, label)
    ObjectSet quorum;
    std::map<ObjectIndex, std::vector<LogEntry>> collected_logs;
    std::uint64_t invoked_at = 0;
    std::size_t t = 1;

    const Evidence* find(ProcessId reader, const Label& label) const;
    bool reports(ProcessId reader) const;
};

/// Token check applied to each collected record when reads are signed.
/// Accepts iff the token is genuine, was minted for the record's reader,
/// was actually received by `object`, and (specific scope) names the
/// record's label.
bool verify_record(const LogEntry& entry, ObjectIndex object, const TokenRegistry& registry);

/// For every distinct (reader, label) in the collected logs, the objects
/// whose log holds a record that survives verification. Independent of t.
std::map<ReadRecord, ObjectSet> attestations(const std::map<ObjectIndex, std::vector<LogEntry>>& logs,
                                             Signing signing, const TokenRegistry& registry);

std::vector<Evidence> collect_evidences(const std::map<ReadRecord, ObjectSet>& attested, std::size_t t);

/// The audit over logs already gathered: a (reader, label) pair is reported
/// once at least t collected logs attest it.
AuditReport audit_logs(const GatheredLogs& gathered, Signing signing, const TokenRegistry& registry,
                       std::size_t t);

/// Gathers logs through the simulation and audits them. `quorum`
/// picks the n - f objects whose replies arrive first.
AuditReport a_audit(Simulation& sim, ProcessId auditor, const std::optional<ObjectSet>& quorum,
                    std::size_t t);

/// `reader=<name> label=<writer>:<seq> objects=<i,j,..> count=<k>`
std::string format_evidence(const Evidence& e, const ProcessTable& names);

}  // namespace arsim

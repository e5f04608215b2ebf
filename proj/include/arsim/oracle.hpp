#pragma once

#include "arsim/audit.hpp"
#include "arsim/config.hpp"
#include "arsim/trace.hpp"

#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

namespace arsim {

enum class Property : std::uint8_t { Completeness, WeakAccuracy, StrongAccuracy };

inline constexpr Property kAllProperties[] = {Property::Completeness, Property::WeakAccuracy,
                                              Property::StrongAccuracy};

std::string_view to_string(Property p);
std::optional<Property> parse_property(std::string_view s);

/// Objects that stored the block of `label` and returned it to `reader`.
struct ProvidingSet {
    ProcessId reader = 0;
    Label label;
    ObjectSet objects;

    friend bool operator==(const ProvidingSet&, const ProvidingSet&) = default;
};

using ReadPair = std::pair<ProcessId, Label>;

/// Only events with ordinal < `before` count; nullopt means the whole trace.
std::vector<ProvidingSet> providing_sets(const ExecutionTrace& trace,
                                         std::optional<std::uint64_t> before = std::nullopt);
std::vector<ReadPair> effective_reads(const ExecutionTrace& trace, std::size_t tau,
                                      std::optional<std::uint64_t> before = std::nullopt);

struct PropertyVerdict {
    Property property = Property::Completeness;
    bool holds = true;
    std::optional<ReadPair> witness;

    friend bool operator==(const PropertyVerdict&, const PropertyVerdict&) = default;
};

/// ReaderLevel: a correct reader that never invoked a-read before the audit
/// must not be reported. PerValue additionally forbids reporting a correct
/// reader for any value it received no block of.
enum class WeakAccuracyMode : std::uint8_t { ReaderLevel, PerValue };

/// Ground truth extracted once from a trace prefix ending at an audit
/// invocation, reusable across any number of candidate evidence sets.
class TraceFacts {
public:
    TraceFacts(const ExecutionTrace& trace, std::uint64_t audit_invoked_at, std::size_t tau);

    std::size_t providing_size(ProcessId reader, const Label& label) const;
    const std::vector<ProvidingSet>& providing() const { return providing_; }
    const std::vector<ReadPair>& effective() const { return effective_; }
    bool invoked_read(ProcessId reader) const { return invoked_.contains(reader); }
    bool correct(ProcessId reader) const;

    PropertyVerdict check(Property p, const std::vector<Evidence>& evidences,
                          WeakAccuracyMode mode = WeakAccuracyMode::ReaderLevel) const;

private:
    const ProcessTable* processes_;
    std::size_t tau_;
    std::vector<ProvidingSet> providing_;
    std::map<ReadPair, std::size_t> sizes_;
    std::vector<ReadPair> effective_;
    std::set<ProcessId> invoked_;
};

/// Throws std::invalid_argument if the report's audit ordinal is not an
/// audit invocation in `trace`.
PropertyVerdict check(Property p, const ExecutionTrace& trace, const AuditReport& report,
                      const ModelConfig& cfg, WeakAccuracyMode mode = WeakAccuracyMode::ReaderLevel);

}  // namespace arsim

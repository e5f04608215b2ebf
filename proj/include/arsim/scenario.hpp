#pragma once

#include "arsim/base_object.hpp"
#include "arsim/config.hpp"
#include "arsim/dispersal.hpp"
#include "arsim/oracle.hpp"
#include "arsim/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace arsim {

/// Load or validation failure. `where` is a field path such as
/// "steps[2].quorum", or "line 4, column 7" for JSON syntax errors.
class ScenarioError : public std::invalid_argument {
public:
    ScenarioError(std::string where, const std::string& what)
        : std::invalid_argument(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

struct Group {
    std::string name;
    ObjectSet members;
};

struct WriteStep {
    ProcessId writer = 0;
    std::string value_name;
    Value value;
    Label label;
    ObjectSet deliver;
    bool crash = false;
};

struct ReadStep {
    ProcessId reader = 0;
    ObjectSet targets;
    std::optional<ObjectSet> deliver;
    std::optional<ObjectSet> round1;
    std::optional<Label> forced_label;
    unsigned retries = 0;
};

struct DeliverStep {
    std::optional<std::string> write_value;  // deliver pending blocks of this write
    std::optional<ProcessId> reader;         // or pending requests of this reader's latest read
    ObjectSet objects;
};

struct AuditStep {
    ProcessId auditor = 0;
    std::optional<ObjectSet> quorum;
};

using Step = std::variant<WriteStep, ReadStep, DeliverStep, AuditStep>;

struct RecordExpectation {
    ProcessId reader = 0;
    Label label;
    std::size_t count = 0;
};

struct EffectiveExpectation {
    ProcessId reader = 0;
    Label label;
    bool effective = false;
};

struct PropertyExpectation {
    Property property = Property::Completeness;
    bool holds = true;
    std::optional<ReadPair> witness;
};

/// Expected verdicts for every t in [t_lo, t_hi]. An empty range (t_lo >
/// t_hi) checks nothing.
struct VerdictExpectation {
    std::size_t t_lo = 1;
    std::size_t t_hi = 1;
    std::vector<PropertyExpectation> properties;
};

struct Scenario {
    std::string name;
    ModelConfig cfg;
    std::uint64_t seed = 0;
    ProcessTable processes;
    std::vector<Group> groups;
    std::map<std::string, Label> values;
    std::vector<FaultScript> scripts;  // one per object
    std::vector<Step> steps;
    std::vector<VerdictExpectation> expect;
    std::vector<RecordExpectation> expect_records;
    std::vector<EffectiveExpectation> expect_effective;
    WeakAccuracyMode weak_accuracy = WeakAccuracyMode::ReaderLevel;
};

struct Overrides {
    std::optional<std::size_t> n;
    std::optional<std::size_t> tau;
    std::optional<std::size_t> t;
    std::optional<Model> model;
    std::optional<std::uint64_t> seed;
};

/// Name of the phantom writer whose label stands for "a value never written".
inline constexpr const char* kBogusWriter = "bogus";

nlohmann::json parse_scenario_text(const std::string& text);
nlohmann::json read_scenario_file(const std::string& path);

/// Resolves group formulas, object-set expressions and value names against
/// the chosen parameters and validates the result.
Scenario instantiate(const nlohmann::json& doc, const Overrides& overrides = {});

Scenario load_scenario(const std::string& path, const Overrides& overrides = {});

/// Expands a set expression such as "G1+G2", "all-G2-G4", 3 or [1,2].
ObjectSet expand_set(const nlohmann::json& expr, const std::vector<Group>& groups, std::size_t n,
                     const std::string& where);

/// Writes a concrete scenario (explicit object indices, no formulas) that
/// instantiates back to an equivalent Scenario.
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace arsim

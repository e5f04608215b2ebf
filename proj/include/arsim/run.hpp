#pragma once

#include "arsim/audit.hpp"
#include "arsim/oracle.hpp"
#include "arsim/scenario.hpp"
#include "arsim/trace.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arsim {

/// A step could not be executed (deadlocked audit, delivery to a crashed
/// writer, ...). `step` is the zero-based step index.
class RunError : public std::runtime_error {
public:
    RunError(std::size_t step, const std::string& what)
        : std::runtime_error("steps[" + std::to_string(step) + "]: " + what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

struct AuditRun {
    std::size_t step = 0;
    AuditReport report;                        // evidences at the scenario's t
    std::map<ReadRecord, ObjectSet> attested;  // verified records, any t
};

struct CheckResult {
    std::string kind;  // "verdict", "records" or "effective"
    std::size_t t = 0;
    std::string subject;
    std::string expected;
    std::string actual;
    bool ok = true;
};

struct RunReport {
    std::string scenario;
    ModelConfig cfg;
    std::uint64_t seed = 0;
    WeakAccuracyMode weak_accuracy = WeakAccuracyMode::ReaderLevel;
    ExecutionTrace trace;
    std::vector<AuditRun> audits;
    std::vector<PropertyVerdict> verdicts;  // last audit, at cfg.t
    std::vector<CheckResult> checks;

    bool matched() const;
};

RunReport execute(const Scenario& scenario);

/// Verdicts of one audit of a finished run, re-thresholded at `t`.
std::vector<PropertyVerdict> verdicts_at(const RunReport& run, std::size_t audit, std::size_t t);

/// Deterministic machine-readable dump, one JSON object per line.
std::vector<std::string> report_json_lines(const RunReport& run);
void print_report(std::ostream& out, const RunReport& run);

}  // namespace arsim

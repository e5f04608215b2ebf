#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace arsim {

using ProcessId = std::uint32_t;

/// 1-based index of a base object; 0 means "no object".
using ObjectIndex = std::uint32_t;

using ObjectSet = std::vector<ObjectIndex>;

/// Identifies the value written by one a-write invocation.
///
/// Labels are totally ordered by (seq, writer); that order decides which
/// value is "most up-to-date" in the two-round read.
struct Label {
    ProcessId writer = 0;
    std::uint64_t seq = 0;

    friend bool operator==(const Label&, const Label&) = default;
    friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
        if (auto c = a.seq <=> b.seq; c != 0) {
            return c;
        }
        return a.writer <=> b.writer;
    }
};

enum class Role : std::uint8_t { Writer, Reader, Auditor };

struct ProcessInfo {
    ProcessId id = 0;
    std::string name;
    Role role = Role::Reader;
    bool correct = true;
};

/// Name lookup for reports. Unknown ids print as "p<id>".
class ProcessTable {
public:
    ProcessTable() = default;
    explicit ProcessTable(std::vector<ProcessInfo> processes) : processes_(std::move(processes)) {}

    const std::vector<ProcessInfo>& all() const { return processes_; }
    const ProcessInfo* find(ProcessId id) const;
    const ProcessInfo* find(std::string_view name) const;
    std::string name(ProcessId id) const;
    bool is_correct(ProcessId id) const;
    std::string label_name(const Label& label) const;

private:
    std::vector<ProcessInfo> processes_;
};

}  // namespace arsim

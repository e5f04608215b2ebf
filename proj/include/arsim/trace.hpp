#pragma once

#include "arsim/tokens.hpp"
#include "arsim/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace arsim {

enum class EventKind : std::uint8_t { Invoke, Deliver, Respond, Complete, Abort, Crash };
enum class OpKind : std::uint8_t { Write, Read, Audit };
enum class MessageKind : std::uint8_t {
    None,
    WriteRequest,
    WriteAck,
    ReadRequest,
    ReadReply,
    LabelQuery,
    LabelReply,
    LogRequest,
    LogReply,
};

/// One entry of an execution. Deliver events are an object receiving a
/// request; Respond events are the object's reply. Invoke/Complete/Abort
/// bracket high-level operations and form the history.
struct Event {
    std::uint64_t ordinal = 0;
    EventKind kind = EventKind::Invoke;
    ProcessId actor = 0;
    ObjectIndex object = 0;
    OpKind op = OpKind::Read;
    std::uint32_t op_id = 0;
    MessageKind message = MessageKind::None;
    std::optional<Label> label;  // block carried, label requested, or label written
    std::optional<TokenId> token;
    std::vector<Label> labels;   // label query replies
    std::uint32_t count = 0;     // records in a log reply

    friend bool operator==(const Event&, const Event&) = default;
};

class ExecutionTrace {
public:
    ExecutionTrace() = default;
    explicit ExecutionTrace(ProcessTable processes) : processes_(std::move(processes)) {}

    /// Appends `e` with the next ordinal and returns that ordinal.
    std::uint64_t append(Event e);

    const std::vector<Event>& events() const { return events_; }
    const ProcessTable& processes() const { return processes_; }
    std::uint64_t next_ordinal() const { return events_.size() + 1; }
    const Event* at(std::uint64_t ordinal) const;

    /// Invocations and high-level responses only.
    std::vector<Event> history() const;

    void reserve(std::size_t n) { events_.reserve(n); }

    friend bool operator==(const ExecutionTrace& a, const ExecutionTrace& b) {
        return a.events_ == b.events_;
    }

private:
    ProcessTable processes_;
    std::vector<Event> events_;
};

std::string_view to_string(EventKind kind);
std::string_view to_string(OpKind kind);
std::string_view to_string(MessageKind kind);

nlohmann::json label_to_json(const Label& label, const ProcessTable& names);
Label label_from_json(const nlohmann::json& j, const ProcessTable& names);

nlohmann::json event_to_json(const Event& e, const ProcessTable& names);
Event event_from_json(const nlohmann::json& j, const ProcessTable& names);

nlohmann::json processes_to_json(const ProcessTable& table);
ProcessTable processes_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const ExecutionTrace& trace);
ExecutionTrace trace_from_json(const nlohmann::json& j);

}  // namespace arsim

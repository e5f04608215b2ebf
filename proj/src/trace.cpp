#include "arsim/trace.hpp"

#include <stdexcept>

namespace arsim {

using nlohmann::json;

std::uint64_t ExecutionTrace::append(Event e) {
    e.ordinal = next_ordinal();
    events_.push_back(std::move(e));
    return events_.back().ordinal;
}

const Event* ExecutionTrace::at(std::uint64_t ordinal) const {
    if (ordinal == 0 || ordinal > events_.size()) {
        return nullptr;
    }
    return &events_[ordinal - 1];
}

std::vector<Event> ExecutionTrace::history() const {
    std::vector<Event> out;
    for (const auto& e : events_) {
        if (e.kind == EventKind::Invoke || e.kind == EventKind::Complete ||
            e.kind == EventKind::Abort) {
            out.push_back(e);
        }
    }
    return out;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Invoke: return "invoke";
        case EventKind::Deliver: return "deliver";
        case EventKind::Respond: return "respond";
        case EventKind::Complete: return "complete";
        case EventKind::Abort: return "abort";
        case EventKind::Crash: return "crash";
    }
    return "?";
}

std::string_view to_string(OpKind kind) {
    switch (kind) {
        case OpKind::Write: return "write";
        case OpKind::Read: return "read";
        case OpKind::Audit: return "audit";
    }
    return "?";
}

std::string_view to_string(MessageKind kind) {
    switch (kind) {
        case MessageKind::None: return "none";
        case MessageKind::WriteRequest: return "write_req";
        case MessageKind::WriteAck: return "write_ack";
        case MessageKind::ReadRequest: return "read_req";
        case MessageKind::ReadReply: return "read_reply";
        case MessageKind::LabelQuery: return "label_query";
        case MessageKind::LabelReply: return "label_reply";
        case MessageKind::LogRequest: return "log_req";
        case MessageKind::LogReply: return "log_reply";
    }
    return "?";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const Enum (&all)[N], const char* what) {
    for (Enum e : all) {
        if (to_string(e) == s) {
            return e;
        }
    }
    throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr EventKind kEventKinds[] = {EventKind::Invoke,   EventKind::Deliver, EventKind::Respond,
                                     EventKind::Complete, EventKind::Abort,   EventKind::Crash};
constexpr OpKind kOpKinds[] = {OpKind::Write, OpKind::Read, OpKind::Audit};
constexpr MessageKind kMessageKinds[] = {
    MessageKind::None,       MessageKind::WriteRequest, MessageKind::WriteAck,
    MessageKind::ReadRequest, MessageKind::ReadReply,   MessageKind::LabelQuery,
    MessageKind::LabelReply, MessageKind::LogRequest,   MessageKind::LogReply};

ProcessId process_id(const json& j, const ProcessTable& names) {
    if (j.is_number_unsigned()) {
        return j.get<ProcessId>();
    }
    const auto name = j.get<std::string>();
    if (const auto* p = names.find(name)) {
        return p->id;
    }
    throw std::invalid_argument("unknown process '" + name + "'");
}

std::string_view role_name(Role r) {
    switch (r) {
        case Role::Writer: return "writer";
        case Role::Reader: return "reader";
        case Role::Auditor: return "auditor";
    }
    return "?";
}

}  // namespace

json label_to_json(const Label& label, const ProcessTable& names) {
    return names.label_name(label);
}

Label label_from_json(const json& j, const ProcessTable& names) {
    const auto s = j.get<std::string>();
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("label must look like <writer>:<seq>, got '" + s + "'");
    }
    Label label;
    label.writer = process_id(json(s.substr(0, colon)), names);
    label.seq = std::stoull(s.substr(colon + 1));
    return label;
}

json event_to_json(const Event& e, const ProcessTable& names) {
    json j;
    j["ordinal"] = e.ordinal;
    j["kind"] = to_string(e.kind);
    j["actor"] = names.name(e.actor);
    if (e.object != 0) {
        j["object"] = e.object;
    }
    j["op"] = to_string(e.op);
    j["op_id"] = e.op_id;
    if (e.message != MessageKind::None) {
        j["message"] = to_string(e.message);
    }
    if (e.label) {
        j["label"] = label_to_json(*e.label, names);
    }
    if (e.token) {
        j["token"] = *e.token;
    }
    if (!e.labels.empty()) {
        json arr = json::array();
        for (const auto& l : e.labels) {
            arr.push_back(label_to_json(l, names));
        }
        j["labels"] = std::move(arr);
    }
    if (e.count != 0) {
        j["count"] = e.count;
    }
    return j;
}

Event event_from_json(const json& j, const ProcessTable& names) {
    Event e;
    e.ordinal = j.at("ordinal").get<std::uint64_t>();
    e.kind = parse_enum(j.at("kind").get<std::string>(), kEventKinds, "event kind");
    e.actor = process_id(j.at("actor"), names);
    e.object = j.value("object", ObjectIndex{0});
    e.op = parse_enum(j.at("op").get<std::string>(), kOpKinds, "operation kind");
    e.op_id = j.at("op_id").get<std::uint32_t>();
    if (j.contains("message")) {
        e.message = parse_enum(j.at("message").get<std::string>(), kMessageKinds, "message kind");
    }
    if (j.contains("label")) {
        e.label = label_from_json(j.at("label"), names);
    }
    if (j.contains("token")) {
        e.token = j.at("token").get<TokenId>();
    }
    if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
            e.labels.push_back(label_from_json(l, names));
        }
    }
    e.count = j.value("count", std::uint32_t{0});
    return e;
}

json processes_to_json(const ProcessTable& table) {
    json arr = json::array();
    for (const auto& p : table.all()) {
        arr.push_back({{"id", p.id}, {"name", p.name}, {"role", role_name(p.role)}, {"correct", p.correct}});
    }
    return arr;
}

ProcessTable processes_from_json(const json& j) {
    std::vector<ProcessInfo> out;
    for (const auto& p : j) {
        ProcessInfo info;
        info.id = p.at("id").get<ProcessId>();
        info.name = p.at("name").get<std::string>();
        const auto role = p.at("role").get<std::string>();
        if (role == "writer") {
            info.role = Role::Writer;
        } else if (role == "reader") {
            info.role = Role::Reader;
        } else if (role == "auditor") {
            info.role = Role::Auditor;
        } else {
            throw std::invalid_argument("unknown role '" + role + "'");
        }
        info.correct = p.at("correct").get<bool>();
        out.push_back(std::move(info));
    }
    return ProcessTable(std::move(out));
}

json trace_to_json(const ExecutionTrace& trace) {
    json events = json::array();
    for (const auto& e : trace.events()) {
        events.push_back(event_to_json(e, trace.processes()));
    }
    return {{"processes", processes_to_json(trace.processes())}, {"events", std::move(events)}};
}

ExecutionTrace trace_from_json(const json& j) {
    ExecutionTrace trace(processes_from_json(j.at("processes")));
    for (const auto& ej : j.at("events")) {
        Event e = event_from_json(ej, trace.processes());
        const auto expected = trace.next_ordinal();
        if (e.ordinal != expected) {
            throw std::invalid_argument("trace ordinals must be consecutive from 1");
        }
        trace.append(std::move(e));
    }
    return trace;
}

}  // namespace arsim

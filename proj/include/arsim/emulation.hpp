#pragma once

#include "arsim/base_object.hpp"
#include "arsim/config.hpp"
#include "arsim/dispersal.hpp"
#include "arsim/tokens.hpp"
#include "arsim/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <variant>
#include <vector>

namespace arsim {

using OpId = std::uint32_t;

/// Thrown when a scheduled step cannot make progress (e.g. an audit quorum
/// member never responds).
class SchedulerDeadlock : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Delivery {
    OpId op = 0;
    ObjectIndex object = 0;
};

/// Orders the deliveries of one batch. Ties between messages posted with the
/// same priority are broken by a seeded draw, so the order is a function of
/// the scenario seed alone.
class Scheduler {
public:
    explicit Scheduler(std::uint64_t seed) : rng_(seed) {}

    void post(Delivery d, std::uint32_t priority = 0);
    std::optional<Delivery> next();
    bool idle() const { return queue_.empty(); }

    /// Shuffles `objects` with the tie-break stream.
    void shuffle(ObjectSet& objects);

private:
    struct Entry {
        std::uint32_t priority;
        std::uint64_t tiebreak;
        std::uint64_t seq;
        Delivery delivery;

        bool operator>(const Entry& o) const {
            if (priority != o.priority) {
                return priority > o.priority;
            }
            if (tiebreak != o.tiebreak) {
                return tiebreak > o.tiebreak;
            }
            return seq > o.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
    std::mt19937_64 rng_;
    std::uint64_t seq_ = 0;
};

struct ReadOutcome {
    ProcessId reader = 0;
    std::vector<Block> blocks_received;  // accumulated over the reader's lifetime
    std::optional<Value> recovered;
    std::optional<Label> recovered_label;
};

struct WriteSchedule {
    ObjectSet deliver;       // objects reached now; the rest stay pending
    bool crash_writer = false;
};

struct NonFastSchedule {
    ObjectSet targets;                    // round-2 recipients
    std::optional<ObjectSet> round1;      // label-query responders; default: targets
    std::optional<ObjectSet> deliver;     // round-2 deliveries now; default: targets
    std::optional<Label> forced_label;    // faulty readers may skip round 1
    unsigned retries = 0;
};

struct WriteResult {
    OpId op = 0;
    Label label;
};

struct SequencedWrite {
    ProcessId writer = 0;
    Value value;
};
struct SequencedRead {
    ProcessId reader = 0;
    ObjectSet targets;
};
using OpRequest = std::variant<SequencedWrite, SequencedRead>;

/// Logs gathered by one audit: the quorum whose replies arrived first and
/// their contents.
struct GatheredLogs {
    OpId op = 0;
    std::uint64_t invoked_at = 0;
    ObjectSet quorum;
    std::map<ObjectIndex, std::vector<LogEntry>> logs;
};

/// n loggable registers plus the client-side a-write / a-read protocols,
/// driven step by step. Every action is appended to the execution trace.
class Simulation {
public:
    Simulation(ModelConfig cfg, std::vector<FaultScript> scripts, ProcessTable processes,
               std::uint64_t seed, const Codec& codec = default_codec());

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    const ModelConfig& config() const { return cfg_; }

    /// Assigns the writer's next label, splits the value and sends block k to
    /// object k. Only `schedule.deliver` is reached now; the write completes
    /// once n - f acks arrive.
    WriteResult a_write(ProcessId writer, const Value& value, const WriteSchedule& schedule);
    void deliver_write(OpId op, const ObjectSet& objects);

    /// One round trip: a plain rw-read to each target. Requests outside
    /// `deliver` (default: all targets) stay pending.
    ReadOutcome a_read_fast(ProcessId reader, const ObjectSet& targets,
                            const std::optional<ObjectSet>& deliver = std::nullopt);

    /// Two rounds: learn the newest label held by n - f objects, then fetch
    /// blocks of exactly that label.
    ReadOutcome a_read_nonfast(ProcessId reader, const NonFastSchedule& schedule);

    void deliver_read(OpId op, const ObjectSet& objects);

    /// Executes one high-level operation to completion before returning;
    /// requires total_order.
    void sequence(const OpRequest& request);

    /// Gives pending two-round reads another label-discovery attempt.
    void step_boundary();

    /// Sends rw-getLog to every object and keeps the first n - f replies.
    /// `quorum`, when given, fixes which replies arrive first.
    GatheredLogs gather_logs(ProcessId auditor, const std::optional<ObjectSet>& quorum);

    OpId last_op() const { return next_op_ - 1; }
    ReadOutcome outcome(ProcessId reader) const;
    bool op_complete(OpId op) const;
    std::optional<Label> op_label(OpId op) const;

    const ExecutionTrace& trace() const { return trace_; }
    ExecutionTrace take_trace() { return std::move(trace_); }
    const BaseObject& object(ObjectIndex k) const { return objects_.at(k - 1); }
    const std::vector<BaseObject>& objects() const { return objects_; }
    const TokenRegistry& tokens() const { return tokens_; }
    const ProcessTable& processes() const { return processes_; }

private:
    struct WriteOp {
        ProcessId writer = 0;
        Label label;
        std::vector<Block> blocks;
        std::vector<bool> pending;
        std::size_t acks = 0;
        bool complete = false;
        bool crashed = false;
    };
    struct ReadOp {
        ProcessId reader = 0;
        ReadMode mode = ReadMode::Fast;
        std::optional<Label> requested;
        std::optional<SignedToken> token;
        std::vector<bool> pending;
        std::size_t replies = 0;
        bool complete = false;
        bool aborted = false;
        bool awaiting_label = false;
        unsigned retries_left = 0;
        NonFastSchedule schedule;
    };
    struct AuditOp {
        ProcessId auditor = 0;
    };
    using Op = std::variant<WriteOp, ReadOp, AuditOp>;

    OpId new_op(Op op);
    void drain();
    void handle_write(OpId id, WriteOp& op, ObjectIndex k);
    void handle_read(OpId id, ReadOp& op, ObjectIndex k);
    bool check_crash(ObjectIndex k);
    void check_object(ObjectIndex k) const;
    void check_set(const ObjectSet& objects) const;
    bool discover_label(OpId id, ReadOp& op);
    void send_round_two(OpId id, ReadOp& op);
    Event event(EventKind kind, ProcessId actor, OpKind opk, OpId id) const;

    ModelConfig cfg_;
    ProcessTable processes_;
    const Codec& codec_;
    TokenRegistry tokens_;
    std::vector<BaseObject> objects_;
    std::vector<bool> crash_logged_;
    ExecutionTrace trace_;
    Scheduler scheduler_;
    std::vector<Op> ops_;
    OpId next_op_ = 1;
    std::map<ProcessId, std::uint64_t> write_seq_;
    std::map<ProcessId, std::map<Label, std::map<ObjectIndex, Block>>> received_;
};

}  // namespace arsim

#include "arsim/emulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace arsim {

void Scheduler::post(Delivery d, std::uint32_t priority) {
    queue_.push(Entry{priority, rng_(), seq_++, d});
}

std::optional<Delivery> Scheduler::next() {
    if (queue_.empty()) {
        return std::nullopt;
    }
    auto d = queue_.top().delivery;
    queue_.pop();
    return d;
}

void Scheduler::shuffle(ObjectSet& objects) {
    // Fisher-Yates on the raw engine output; std::shuffle is not portable.
    for (std::size_t i = objects.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng_() % i);
        std::swap(objects[i - 1], objects[j]);
    }
}

Simulation::Simulation(ModelConfig cfg, std::vector<FaultScript> scripts, ProcessTable processes,
                       std::uint64_t seed, const Codec& codec)
    : cfg_(cfg), processes_(std::move(processes)), codec_(codec), trace_(processes_),
      scheduler_(seed) {
    cfg_.validate();
    if (scripts.size() != cfg_.n) {
        throw std::invalid_argument("expected one fault script per object");
    }
    std::size_t faulty = 0;
    objects_.reserve(cfg_.n);
    for (std::size_t k = 0; k < cfg_.n; ++k) {
        faulty += scripts[k].is_faulty ? 1 : 0;
        const TokenVerifier* verifier = cfg_.signing == Signing::None ? nullptr : &tokens_;
        objects_.emplace_back(static_cast<ObjectIndex>(k + 1), std::move(scripts[k]), cfg_.signing,
                              verifier);
    }
    if (faulty > cfg_.f) {
        throw std::invalid_argument("more than f objects are marked faulty");
    }
    crash_logged_.assign(cfg_.n, false);
    trace_.reserve(16 * cfg_.n);
}

Event Simulation::event(EventKind kind, ProcessId actor, OpKind opk, OpId id) const {
    Event e;
    e.kind = kind;
    e.actor = actor;
    e.op = opk;
    e.op_id = id;
    return e;
}

OpId Simulation::new_op(Op op) {
    ops_.push_back(std::move(op));
    return next_op_++;
}

void Simulation::check_object(ObjectIndex k) const {
    if (k < 1 || k > cfg_.n) {
        throw std::invalid_argument("object index " + std::to_string(k) + " outside [1, " +
                                    std::to_string(cfg_.n) + "]");
    }
}

void Simulation::check_set(const ObjectSet& objects) const {
    for (auto k : objects) {
        check_object(k);
    }
}

bool Simulation::check_crash(ObjectIndex k) {
    auto& obj = objects_[k - 1];
    const auto& limit = obj.script().crash_after_event;
    if (!obj.crashed() && limit && trace_.next_ordinal() > *limit) {
        obj.crash();
    }
    if (obj.crashed() && !crash_logged_[k - 1]) {
        crash_logged_[k - 1] = true;
        Event e;
        e.kind = EventKind::Crash;
        e.object = k;
        trace_.append(std::move(e));
    }
    return obj.crashed();
}

WriteResult Simulation::a_write(ProcessId writer, const Value& value, const WriteSchedule& schedule) {
    const auto* info = processes_.find(writer);
    if (info == nullptr || info->role != Role::Writer) {
        throw std::invalid_argument("a-write invoked by a process that is not a writer");
    }
    check_set(schedule.deliver);
    if (cfg_.total_order && (schedule.crash_writer || schedule.deliver.size() != cfg_.n)) {
        throw std::invalid_argument("total order delivers every write to all objects");
    }

    WriteOp op;
    op.writer = writer;
    op.label = Label{writer, ++write_seq_[writer]};
    op.blocks = codec_.split(value, op.label, cfg_.codec());
    op.pending.assign(cfg_.n + 1, true);
    op.pending[0] = false;
    const Label label = op.label;
    const OpId id = new_op(std::move(op));

    Event inv = event(EventKind::Invoke, writer, OpKind::Write, id);
    inv.label = label;
    trace_.append(std::move(inv));

    deliver_write(id, schedule.deliver);

    if (schedule.crash_writer) {
        auto& w = std::get<WriteOp>(ops_[id - 1]);
        w.crashed = true;
        std::fill(w.pending.begin(), w.pending.end(), false);
        trace_.append(event(EventKind::Crash, writer, OpKind::Write, id));
    }
    return {id, label};
}

void Simulation::deliver_write(OpId id, const ObjectSet& objects) {
    if (id < 1 || id >= next_op_ || !std::holds_alternative<WriteOp>(ops_[id - 1])) {
        throw std::invalid_argument("no write operation with id " + std::to_string(id));
    }
    check_set(objects);
    auto& op = std::get<WriteOp>(ops_[id - 1]);
    if (op.crashed) {
        throw std::invalid_argument("the writer of this operation has crashed");
    }
    for (auto k : objects) {
        if (op.pending[k]) {
            op.pending[k] = false;
            scheduler_.post({id, k});
        }
    }
    drain();
}

void Simulation::drain() {
    while (auto d = scheduler_.next()) {
        auto& op = ops_[d->op - 1];
        if (auto* w = std::get_if<WriteOp>(&op)) {
            handle_write(d->op, *w, d->object);
        } else if (auto* r = std::get_if<ReadOp>(&op)) {
            handle_read(d->op, *r, d->object);
        }
    }
}

void Simulation::handle_write(OpId id, WriteOp& op, ObjectIndex k) {
    if (check_crash(k)) {
        return;
    }
    const Block& block = op.blocks[k - 1];

    Event del = event(EventKind::Deliver, op.writer, OpKind::Write, id);
    del.object = k;
    del.message = MessageKind::WriteRequest;
    del.label = block.label;
    trace_.append(std::move(del));

    objects_[k - 1].rw_write(block);

    Event ack = event(EventKind::Respond, op.writer, OpKind::Write, id);
    ack.object = k;
    ack.message = MessageKind::WriteAck;
    ack.label = block.label;
    trace_.append(std::move(ack));

    if (++op.acks == cfg_.quorum_size() && !op.complete) {
        op.complete = true;
        Event done = event(EventKind::Complete, op.writer, OpKind::Write, id);
        done.label = op.label;
        trace_.append(std::move(done));
    }
}

void Simulation::handle_read(OpId id, ReadOp& op, ObjectIndex k) {
    if (check_crash(k)) {
        return;
    }
    Event del = event(EventKind::Deliver, op.reader, OpKind::Read, id);
    del.object = k;
    del.message = MessageKind::ReadRequest;
    del.label = op.requested;
    if (op.token) {
        del.token = op.token->nonce;
        tokens_.note_receipt(k, op.token->nonce);
    }
    trace_.append(std::move(del));

    auto reply = objects_[k - 1].rw_read(ReadRequest{op.reader, op.requested, op.token});
    if (!reply) {
        return;
    }
    Event resp = event(EventKind::Respond, op.reader, OpKind::Read, id);
    resp.object = k;
    resp.message = MessageKind::ReadReply;
    if (reply->block) {
        resp.label = reply->block->label;
        received_[op.reader][reply->block->label].insert_or_assign(k, *reply->block);
    }
    trace_.append(std::move(resp));

    if (++op.replies == cfg_.quorum_size() && !op.complete) {
        op.complete = true;
        Event done = event(EventKind::Complete, op.reader, OpKind::Read, id);
        done.label = op.requested;
        trace_.append(std::move(done));
    }
}

ReadOutcome Simulation::a_read_fast(ProcessId reader, const ObjectSet& targets,
                                    const std::optional<ObjectSet>& deliver) {
    const auto* info = processes_.find(reader);
    if (info == nullptr || info->role != Role::Reader) {
        throw std::invalid_argument("a-read invoked by a process that is not a reader");
    }
    if (cfg_.read_mode != ReadMode::Fast) {
        throw std::invalid_argument("fast read requested under the two-round read mode");
    }
    check_set(targets);

    ReadOp op;
    op.reader = reader;
    op.mode = ReadMode::Fast;
    op.pending.assign(cfg_.n + 1, false);
    for (auto k : targets) {
        op.pending[k] = true;
    }
    if (cfg_.signing == Signing::Generic) {
        op.token = tokens_.mint(reader, std::nullopt);
    }
    const OpId id = new_op(std::move(op));
    trace_.append(event(EventKind::Invoke, reader, OpKind::Read, id));

    deliver_read(id, deliver.value_or(targets));
    return outcome(reader);
}

ReadOutcome Simulation::a_read_nonfast(ProcessId reader, const NonFastSchedule& schedule) {
    const auto* info = processes_.find(reader);
    if (info == nullptr || info->role != Role::Reader) {
        throw std::invalid_argument("a-read invoked by a process that is not a reader");
    }
    if (cfg_.read_mode != ReadMode::NonFast) {
        throw std::invalid_argument("two-round read requested under the fast read mode");
    }
    check_set(schedule.targets);
    if (schedule.round1) {
        check_set(*schedule.round1);
    }
    if (schedule.forced_label && info->correct) {
        throw std::invalid_argument("correct readers must learn the label in the first round");
    }

    ReadOp op;
    op.reader = reader;
    op.mode = ReadMode::NonFast;
    op.pending.assign(cfg_.n + 1, false);
    op.retries_left = schedule.retries;
    op.schedule = schedule;
    const OpId id = new_op(std::move(op));
    trace_.append(event(EventKind::Invoke, reader, OpKind::Read, id));

    auto& r = std::get<ReadOp>(ops_[id - 1]);
    if (schedule.forced_label) {
        r.requested = schedule.forced_label;
        send_round_two(id, r);
    } else if (discover_label(id, r)) {
        send_round_two(id, std::get<ReadOp>(ops_[id - 1]));
    } else {
        auto& again = std::get<ReadOp>(ops_[id - 1]);
        if (again.retries_left == 0) {
            again.aborted = true;
            trace_.append(event(EventKind::Abort, reader, OpKind::Read, id));
        } else {
            again.awaiting_label = true;
        }
    }
    return outcome(reader);
}

bool Simulation::discover_label(OpId id, ReadOp& op) {
    const ProcessId reader = op.reader;
    ObjectSet responders = op.schedule.round1.value_or(op.schedule.targets);
    std::sort(responders.begin(), responders.end());
    responders.erase(std::unique(responders.begin(), responders.end()), responders.end());

    std::map<Label, std::size_t> counts;
    for (auto k : responders) {
        if (check_crash(k)) {
            continue;
        }
        Event q = event(EventKind::Deliver, reader, OpKind::Read, id);
        q.object = k;
        q.message = MessageKind::LabelQuery;
        trace_.append(std::move(q));

        const auto& obj = objects_[k - 1];
        if (obj.omits_block_to(reader, std::nullopt)) {
            continue;
        }
        auto labels = obj.held_labels().value_or(std::vector<Label>{});
        for (const auto& l : labels) {
            ++counts[l];
        }
        Event a = event(EventKind::Respond, reader, OpKind::Read, id);
        a.object = k;
        a.message = MessageKind::LabelReply;
        a.labels = std::move(labels);
        trace_.append(std::move(a));
    }

    // Correct readers follow the n - f rule; faulty readers take whatever is newest.
    const std::size_t needed = processes_.is_correct(reader) ? cfg_.quorum_size() : 1;
    auto& current = std::get<ReadOp>(ops_[id - 1]);
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
        if (it->second >= needed) {
            current.requested = it->first;
            return true;
        }
    }
    return false;
}

void Simulation::send_round_two(OpId id, ReadOp& op) {
    if (cfg_.signing == Signing::Generic) {
        op.token = tokens_.mint(op.reader, std::nullopt);
    } else if (cfg_.signing == Signing::Specific) {
        op.token = tokens_.mint(op.reader, op.requested);
    }
    for (auto k : op.schedule.targets) {
        op.pending[k] = true;
    }
    const ObjectSet now = op.schedule.deliver.value_or(op.schedule.targets);
    deliver_read(id, now);
}

void Simulation::deliver_read(OpId id, const ObjectSet& objects) {
    if (id < 1 || id >= next_op_ || !std::holds_alternative<ReadOp>(ops_[id - 1])) {
        throw std::invalid_argument("no read operation with id " + std::to_string(id));
    }
    check_set(objects);
    auto& op = std::get<ReadOp>(ops_[id - 1]);
    for (auto k : objects) {
        if (op.pending[k]) {
            op.pending[k] = false;
            scheduler_.post({id, k});
        }
    }
    drain();
}

void Simulation::step_boundary() {
    for (OpId id = 1; id < next_op_; ++id) {
        auto* op = std::get_if<ReadOp>(&ops_[id - 1]);
        if (op == nullptr || !op->awaiting_label) {
            continue;
        }
        --op->retries_left;
        if (discover_label(id, *op)) {
            auto& r = std::get<ReadOp>(ops_[id - 1]);
            r.awaiting_label = false;
            send_round_two(id, r);
        } else if (op->retries_left == 0) {
            op->awaiting_label = false;
            op->aborted = true;
            trace_.append(event(EventKind::Abort, op->reader, OpKind::Read, id));
        }
    }
}

void Simulation::sequence(const OpRequest& request) {
    if (!cfg_.total_order) {
        throw std::logic_error("sequence() requires the total order variant");
    }
    ObjectSet everyone(cfg_.n);
    for (std::size_t k = 0; k < cfg_.n; ++k) {
        everyone[k] = static_cast<ObjectIndex>(k + 1);
    }
    if (const auto* w = std::get_if<SequencedWrite>(&request)) {
        a_write(w->writer, w->value, WriteSchedule{everyone, false});
        return;
    }
    const auto& r = std::get<SequencedRead>(request);
    if (cfg_.read_mode == ReadMode::Fast) {
        a_read_fast(r.reader, r.targets);
    } else {
        NonFastSchedule s;
        s.targets = r.targets;
        a_read_nonfast(r.reader, s);
    }
}

GatheredLogs Simulation::gather_logs(ProcessId auditor, const std::optional<ObjectSet>& quorum) {
    const std::size_t size = cfg_.quorum_size();
    if (quorum) {
        check_set(*quorum);
        ObjectSet sorted = *quorum;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("audit quorum lists an object twice");
        }
        if (sorted.size() != size) {
            throw std::invalid_argument("audit quorum must contain exactly n - f = " +
                                        std::to_string(size) + " objects");
        }
    }

    const OpId id = new_op(AuditOp{auditor});
    GatheredLogs out;
    out.op = id;
    out.invoked_at = trace_.append(event(EventKind::Invoke, auditor, OpKind::Audit, id));

    ObjectSet responders;
    for (ObjectIndex k = 1; k <= cfg_.n; ++k) {
        if (check_crash(k)) {
            continue;
        }
        Event del = event(EventKind::Deliver, auditor, OpKind::Audit, id);
        del.object = k;
        del.message = MessageKind::LogRequest;
        trace_.append(std::move(del));
        responders.push_back(k);
    }

    ObjectSet order;
    if (quorum) {
        for (auto k : *quorum) {
            if (std::find(responders.begin(), responders.end(), k) == responders.end()) {
                throw SchedulerDeadlock("audit cannot gather n - f logs: object " + std::to_string(k) +
                                        " in the chosen quorum never responds");
            }
        }
        order = *quorum;
    } else {
        if (responders.size() < size) {
            throw SchedulerDeadlock("audit cannot gather n - f logs: only " +
                                    std::to_string(responders.size()) + " objects respond");
        }
        scheduler_.shuffle(responders);
        order.assign(responders.begin(), responders.begin() + static_cast<std::ptrdiff_t>(size));
    }

    for (auto k : order) {
        auto log = objects_[k - 1].rw_get_log().value_or(std::vector<LogEntry>{});
        Event resp = event(EventKind::Respond, auditor, OpKind::Audit, id);
        resp.object = k;
        resp.message = MessageKind::LogReply;
        resp.count = static_cast<std::uint32_t>(log.size());
        trace_.append(std::move(resp));
        out.logs.emplace(k, std::move(log));
    }
    trace_.append(event(EventKind::Complete, auditor, OpKind::Audit, id));

    out.quorum = order;
    std::sort(out.quorum.begin(), out.quorum.end());
    return out;
}

ReadOutcome Simulation::outcome(ProcessId reader) const {
    ReadOutcome out;
    out.reader = reader;
    auto it = received_.find(reader);
    if (it == received_.end()) {
        return out;
    }
    for (const auto& [label, blocks] : it->second) {
        for (const auto& [k, b] : blocks) {
            out.blocks_received.push_back(b);
        }
    }
    for (auto lit = it->second.rbegin(); lit != it->second.rend(); ++lit) {
        if (lit->second.size() >= cfg_.tau) {
            std::vector<Block> blocks;
            for (const auto& [k, b] : lit->second) {
                blocks.push_back(b);
            }
            out.recovered = codec_.combine(blocks, cfg_.codec());
            out.recovered_label = lit->first;
            break;
        }
    }
    return out;
}

bool Simulation::op_complete(OpId id) const {
    if (id < 1 || id >= next_op_) {
        return false;
    }
    const auto& op = ops_[id - 1];
    if (const auto* w = std::get_if<WriteOp>(&op)) {
        return w->complete;
    }
    if (const auto* r = std::get_if<ReadOp>(&op)) {
        return r->complete;
    }
    return true;
}

std::optional<Label> Simulation::op_label(OpId id) const {
    if (id < 1 || id >= next_op_) {
        return std::nullopt;
    }
    const auto& op = ops_[id - 1];
    if (const auto* w = std::get_if<WriteOp>(&op)) {
        return w->label;
    }
    if (const auto* r = std::get_if<ReadOp>(&op)) {
        return r->requested;
    }
    return std::nullopt;
}

}  // namespace arsim

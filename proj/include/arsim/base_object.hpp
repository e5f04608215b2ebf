#pragma once

#include "arsim/config.hpp"
#include "arsim/dispersal.hpp"
#include "arsim/tokens.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace arsim {

struct ReadRecord {
    ProcessId reader = 0;
    Label label;

    friend bool operator==(const ReadRecord&, const ReadRecord&) = default;
    friend auto operator<=>(const ReadRecord& a, const ReadRecord& b) {
        if (auto c = a.reader <=> b.reader; c != 0) {
            return c;
        }
        return a.label <=> b.label;
    }
};

/// A log entry as returned by rw-getLog: the record plus whatever token the
/// object presents for it.
struct LogEntry {
    ReadRecord record;
    std::optional<SignedToken> token;

    friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

/// Suppresses value responses to `reader`; an empty label matches any block.
struct OmitRule {
    ProcessId reader = 0;
    std::optional<Label> label;

    friend bool operator==(const OmitRule&, const OmitRule&) = default;
};

struct FaultScript {
    bool is_faulty = false;
    std::vector<OmitRule> omit_block_to;
    bool omit_records_to_audit = false;
    std::vector<ReadRecord> fabricate;
    std::optional<std::uint64_t> crash_after_event;

    bool deviates() const {
        return !omit_block_to.empty() || omit_records_to_audit || !fabricate.empty() ||
               crash_after_event.has_value();
    }
    /// Throws std::invalid_argument when a deviation is scripted on a
    /// correct object.
    void validate() const;

    friend bool operator==(const FaultScript&, const FaultScript&) = default;
};

struct ReadRequest {
    ProcessId reader = 0;
    std::optional<Label> requested_label;  // second round of a two-round read
    std::optional<SignedToken> token;
};

/// Reply to rw-read; `block` empty means ⊥.
struct ReadReply {
    std::optional<Block> block;
};

/// Loggable R/W register o_k. Holds the last written block (and, for the
/// two-round read, every version it was written), a set-valued read log, and
/// the fault script that governs deviations.
class BaseObject {
public:
    BaseObject(ObjectIndex index, FaultScript script = {}, Signing signing = Signing::None,
               const TokenVerifier* verifier = nullptr);

    ObjectIndex index() const { return index_; }
    const FaultScript& script() const { return script_; }
    bool faulty() const { return script_.is_faulty; }
    bool crashed() const { return crashed_; }
    void crash() { crashed_ = true; }

    /// Stores `block`. Throws std::invalid_argument if the block was
    /// generated for another object.
    void rw_write(const Block& block);

    /// Serves a read. Returns nullopt when no reply is sent (crash, scripted
    /// omission, or failed signature check).
    std::optional<ReadReply> rw_read(const ReadRequest& request);

    /// Returns nullopt when crashed.
    std::optional<std::vector<LogEntry>> rw_get_log() const;

    /// Labels of every version held, ascending; nullopt when crashed.
    std::optional<std::vector<Label>> held_labels() const;
    bool holds(const Label& label) const;

    const std::optional<Block>& stored() const { return stored_; }
    const std::map<ReadRecord, std::optional<SignedToken>>& true_log() const { return log_; }
    const std::vector<SignedToken>& received_tokens() const { return received_; }

    /// Records this object would add to an audit response without having
    /// served the corresponding read. Oracle bookkeeping only.
    std::vector<ReadRecord> fabricated_records() const;

    bool omits_block_to(ProcessId reader, const std::optional<Label>& label) const;

private:
    std::optional<SignedToken> token_for(const ReadRecord& record) const;

    ObjectIndex index_;
    FaultScript script_;
    Signing signing_;
    const TokenVerifier* verifier_;
    bool crashed_ = false;
    std::optional<Block> stored_;
    std::vector<Block> versions_;
    std::map<ReadRecord, std::optional<SignedToken>> log_;
    std::vector<SignedToken> received_;
};

}  // namespace arsim

#include "arsim/base_object.hpp"

#include <algorithm>
#include <stdexcept>

namespace arsim {

void FaultScript::validate() const {
    if (!is_faulty && deviates()) {
        throw std::invalid_argument("fault script deviates but the object is not marked faulty");
    }
}

BaseObject::BaseObject(ObjectIndex index, FaultScript script, Signing signing,
                       const TokenVerifier* verifier)
    : index_(index), script_(std::move(script)), signing_(signing), verifier_(verifier) {
    if (index_ == 0) {
        throw std::invalid_argument("object indices start at 1");
    }
    script_.validate();
    if (signing_ != Signing::None && verifier_ == nullptr) {
        throw std::invalid_argument("signed reads need a token verifier");
    }
}

void BaseObject::rw_write(const Block& block) {
    if (block.index != index_) {
        throw std::invalid_argument("block " + std::to_string(block.index) +
                                    " delivered to object " + std::to_string(index_));
    }
    if (crashed_) {
        return;
    }
    stored_ = block;
    auto same = [&](const Block& b) { return b.label == block.label; };
    if (std::find_if(versions_.begin(), versions_.end(), same) == versions_.end()) {
        versions_.push_back(block);
    }
}

bool BaseObject::omits_block_to(ProcessId reader, const std::optional<Label>& label) const {
    if (!script_.is_faulty) {
        return false;
    }
    return std::any_of(script_.omit_block_to.begin(), script_.omit_block_to.end(),
                       [&](const OmitRule& rule) {
                           return rule.reader == reader && (!rule.label || rule.label == label);
                       });
}

std::optional<ReadReply> BaseObject::rw_read(const ReadRequest& request) {
    if (crashed_) {
        return std::nullopt;
    }
    if (request.token) {
        received_.push_back(*request.token);
    }

    if (signing_ != Signing::None && !script_.is_faulty) {
        const auto& token = request.token;
        if (!token || !verifier_->genuine(*token) || token->reader != request.reader) {
            return std::nullopt;
        }
        if (token->label && (!request.requested_label || *token->label != *request.requested_label)) {
            return std::nullopt;
        }
    }

    std::optional<Block> served;
    if (request.requested_label) {
        for (const auto& version : versions_) {
            if (version.label == *request.requested_label) {
                served = version;
                break;
            }
        }
    } else {
        served = stored_;
    }

    if (served) {
        log_.try_emplace(ReadRecord{request.reader, served->label}, request.token);
    }

    const std::optional<Label> label = served ? std::optional<Label>(served->label) : std::nullopt;
    if (omits_block_to(request.reader, label)) {
        return std::nullopt;
    }
    return ReadReply{std::move(served)};
}

std::optional<SignedToken> BaseObject::token_for(const ReadRecord& record) const {
    const SignedToken* fallback = nullptr;
    const SignedToken* generic = nullptr;
    for (const auto& token : received_) {
        if (token.reader != record.reader) {
            continue;
        }
        if (token.label && *token.label == record.label) {
            return token;
        }
        if (!token.label && generic == nullptr) {
            generic = &token;
        }
        if (fallback == nullptr) {
            fallback = &token;
        }
    }
    if (generic != nullptr) {
        return *generic;
    }
    if (fallback != nullptr) {
        return *fallback;
    }
    return std::nullopt;
}

std::optional<std::vector<LogEntry>> BaseObject::rw_get_log() const {
    if (crashed_) {
        return std::nullopt;
    }
    std::map<ReadRecord, std::optional<SignedToken>> out;
    if (!(script_.is_faulty && script_.omit_records_to_audit)) {
        out = log_;
    }
    if (script_.is_faulty) {
        for (const auto& record : script_.fabricate) {
            out.try_emplace(record, token_for(record));
        }
    }
    std::vector<LogEntry> entries;
    entries.reserve(out.size());
    for (auto& [record, token] : out) {
        entries.push_back({record, token});
    }
    return entries;
}

std::optional<std::vector<Label>> BaseObject::held_labels() const {
    if (crashed_) {
        return std::nullopt;
    }
    std::vector<Label> labels;
    labels.reserve(versions_.size());
    for (const auto& v : versions_) {
        labels.push_back(v.label);
    }
    std::sort(labels.begin(), labels.end());
    return labels;
}

bool BaseObject::holds(const Label& label) const {
    return std::any_of(versions_.begin(), versions_.end(),
                       [&](const Block& b) { return b.label == label; });
}

std::vector<ReadRecord> BaseObject::fabricated_records() const {
    std::vector<ReadRecord> out;
    if (!script_.is_faulty) {
        return out;
    }
    for (const auto& record : script_.fabricate) {
        if (!log_.contains(record)) {
            out.push_back(record);
        }
    }
    return out;
}

}  // namespace arsim

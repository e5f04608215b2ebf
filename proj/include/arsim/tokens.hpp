#pragma once

#include "arsim/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>

namespace arsim {

using TokenId = std::uint64_t;

/// Capability standing in for a signed read request. Only the trusted
/// environment mints tokens; objects can replay tokens they were sent but
/// cannot create new ones.
struct SignedToken {
    TokenId nonce = 0;
    ProcessId reader = 0;
    std::optional<Label> label;  // nullopt: valid for any value

    friend bool operator==(const SignedToken&, const SignedToken&) = default;
};

/// Signature check used by correct objects and by the audit. A real
/// signature scheme would implement this interface.
class TokenVerifier {
public:
    virtual ~TokenVerifier() = default;
    virtual bool genuine(const SignedToken& token) const = 0;
};

class TokenRegistry final : public TokenVerifier {
public:
    SignedToken mint(ProcessId reader, std::optional<Label> label);

    void note_receipt(ObjectIndex object, TokenId nonce);
    bool received(ObjectIndex object, TokenId nonce) const;

    const SignedToken* find(TokenId nonce) const;
    bool genuine(const SignedToken& token) const override;

    const std::map<TokenId, SignedToken>& minted() const { return minted_; }

private:
    TokenId next_ = 1;
    std::map<TokenId, SignedToken> minted_;
    std::set<std::pair<ObjectIndex, TokenId>> receipts_;
};

}  // namespace arsim

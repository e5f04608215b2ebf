#include "arsim/tokens.hpp"

namespace arsim {

SignedToken TokenRegistry::mint(ProcessId reader, std::optional<Label> label) {
    SignedToken token{next_++, reader, label};
    minted_.emplace(token.nonce, token);
    return token;
}

void TokenRegistry::note_receipt(ObjectIndex object, TokenId nonce) {
    receipts_.emplace(object, nonce);
}

bool TokenRegistry::received(ObjectIndex object, TokenId nonce) const {
    return receipts_.contains({object, nonce});
}

const SignedToken* TokenRegistry::find(TokenId nonce) const {
    auto it = minted_.find(nonce);
    return it == minted_.end() ? nullptr : &it->second;
}

bool TokenRegistry::genuine(const SignedToken& token) const {
    const auto* minted = find(token.nonce);
    return minted != nullptr && *minted == token;
}

}  // namespace arsim

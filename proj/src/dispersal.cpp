#include "arsim/dispersal.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace arsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t coefficient_seed(const Label& label, const CodecParams& params) {
    std::uint64_t h = splitmix64(0x6172'7369'6d2d'6964ULL);  // "arsim-id"
    for (std::uint64_t word : {std::uint64_t{label.writer}, label.seq, std::uint64_t{params.n},
                               std::uint64_t{params.tau}}) {
        h = splitmix64(h ^ word);
    }
    return h;
}

// Uniform draw in [0, 257) from the raw engine output; the raw mt19937_64
// sequence is fixed by the standard, distributions are not.
std::uint32_t draw_element(std::mt19937_64& engine) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    constexpr std::uint64_t kLimit = kMax - (kMax % gf257::kPrime);
    std::uint64_t x = engine();
    while (x >= kLimit) {
        x = engine();
    }
    return static_cast<std::uint32_t>(x % gf257::kPrime);
}

}  // namespace

Value::Value(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty()) {
        throw std::invalid_argument("value payload must not be empty");
    }
    if (bytes_.size() > kMaxPayloadBytes) {
        throw std::invalid_argument("value payload exceeds 64 bytes");
    }
}

Value Value::from_hex(std::string_view hex) {
    std::vector<std::uint8_t> bytes;
    int pending = -1;
    for (char c : hex) {
        if (c == ' ' || c == ':' || c == '_') {
            continue;
        }
        int nibble = -1;
        if (c >= '0' && c <= '9') {
            nibble = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            nibble = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            nibble = c - 'A' + 10;
        } else {
            throw std::invalid_argument("invalid hex digit in payload: '" + std::string(1, c) + "'");
        }
        if (pending < 0) {
            pending = nibble;
        } else {
            bytes.push_back(static_cast<std::uint8_t>(pending * 16 + nibble));
            pending = -1;
        }
    }
    if (pending >= 0) {
        throw std::invalid_argument("odd number of hex digits in payload");
    }
    return Value(std::move(bytes));
}

std::string Value::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (auto b : bytes_) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xF]);
    }
    return out;
}

void CodecParams::validate() const {
    if (tau < 1 || tau > n) {
        std::ostringstream os;
        os << "invalid codec parameters: need 1 <= tau <= n, got n=" << n << " tau=" << tau;
        throw CodecError(CodecError::Kind::InvalidParams, os.str());
    }
    if (n >= gf257::kPrime) {
        throw CodecError(CodecError::Kind::InvalidParams, "n must be below the field size 257");
    }
}

std::uint32_t gf257::inv(std::uint32_t a) {
    a %= kPrime;
    if (a == 0) {
        throw std::domain_error("inverse of zero in GF(257)");
    }
    // a^(p-2)
    std::uint32_t result = 1;
    std::uint32_t base = a;
    for (std::uint32_t e = kPrime - 2; e > 0; e >>= 1) {
        if (e & 1U) {
            result = mul(result, base);
        }
        base = mul(base, base);
    }
    return result;
}

std::vector<Block> ShamirCodec::split(const Value& value, const Label& label,
                                      const CodecParams& params) const {
    params.validate();
    if (value.empty()) {
        throw std::invalid_argument("cannot split an empty value");
    }

    std::mt19937_64 engine(coefficient_seed(label, params));
    const std::size_t width = value.size();

    // coefficients[j][d]: degree-d coefficient for payload byte j; d = 0 is the byte.
    std::vector<std::vector<std::uint32_t>> coefficients(width, std::vector<std::uint32_t>(params.tau));
    for (std::size_t j = 0; j < width; ++j) {
        coefficients[j][0] = value.bytes()[j];
        for (std::size_t d = 1; d < params.tau; ++d) {
            coefficients[j][d] = draw_element(engine);
        }
    }

    std::vector<Block> blocks;
    blocks.reserve(params.n);
    for (std::size_t k = 1; k <= params.n; ++k) {
        Block block{label, static_cast<ObjectIndex>(k), {}};
        block.share.reserve(width);
        const auto x = static_cast<std::uint32_t>(k);
        for (std::size_t j = 0; j < width; ++j) {
            // Horner
            std::uint32_t acc = 0;
            for (std::size_t d = params.tau; d-- > 0;) {
                acc = gf257::add(gf257::mul(acc, x), coefficients[j][d]);
            }
            block.share.push_back(static_cast<std::uint16_t>(acc));
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

Value ShamirCodec::combine(std::span<const Block> blocks, const CodecParams& params) const {
    params.validate();
    if (blocks.empty()) {
        throw CodecError(CodecError::Kind::InsufficientBlocks, "no blocks to combine");
    }

    const Label& label = blocks.front().label;
    std::set<ObjectIndex> seen;
    for (const auto& b : blocks) {
        if (!(b.label == label)) {
            throw CodecError(CodecError::Kind::MixedLabels, "blocks carry different labels");
        }
        if (b.index < 1 || b.index > params.n) {
            throw CodecError(CodecError::Kind::InvalidBlock, "block index outside [1, n]");
        }
        if (!seen.insert(b.index).second) {
            throw CodecError(CodecError::Kind::DuplicateIndex,
                             "duplicate block index " + std::to_string(b.index));
        }
    }
    if (blocks.size() < params.tau) {
        std::ostringstream os;
        os << "need " << params.tau << " blocks, got " << blocks.size();
        throw CodecError(CodecError::Kind::InsufficientBlocks, os.str());
    }

    std::vector<const Block*> chosen;
    chosen.reserve(blocks.size());
    for (const auto& b : blocks) {
        chosen.push_back(&b);
    }
    std::sort(chosen.begin(), chosen.end(),
              [](const Block* a, const Block* b) { return a->index < b->index; });
    chosen.resize(params.tau);

    const std::size_t width = chosen.front()->share.size();
    for (const auto* b : chosen) {
        if (b->share.size() != width || width == 0 || width > kMaxPayloadBytes) {
            throw CodecError(CodecError::Kind::InvalidBlock, "inconsistent share width");
        }
    }

    // Lagrange basis at x = 0.
    std::vector<std::uint32_t> basis(params.tau);
    for (std::size_t i = 0; i < params.tau; ++i) {
        std::uint32_t num = 1;
        std::uint32_t den = 1;
        const std::uint32_t xi = chosen[i]->index;
        for (std::size_t m = 0; m < params.tau; ++m) {
            if (m == i) {
                continue;
            }
            const std::uint32_t xm = chosen[m]->index;
            num = gf257::mul(num, gf257::sub(0, xm));
            den = gf257::mul(den, gf257::sub(xi, xm));
        }
        basis[i] = gf257::mul(num, gf257::inv(den));
    }

    std::vector<std::uint8_t> bytes(width);
    for (std::size_t j = 0; j < width; ++j) {
        std::uint32_t acc = 0;
        for (std::size_t i = 0; i < params.tau; ++i) {
            acc = gf257::add(acc, gf257::mul(basis[i], chosen[i]->share[j] % gf257::kPrime));
        }
        if (acc > 0xFF) {
            throw CodecError(CodecError::Kind::InvalidBlock, "shares do not decode to a byte");
        }
        bytes[j] = static_cast<std::uint8_t>(acc);
    }
    return Value(std::move(bytes));
}

const Codec& default_codec() {
    static const ShamirCodec codec;
    return codec;
}

std::vector<Block> split(const Value& value, const Label& label, const CodecParams& params) {
    return default_codec().split(value, label, params);
}

Value combine(std::span<const Block> blocks, const CodecParams& params) {
    return default_codec().combine(blocks, params);
}

}  // namespace arsim

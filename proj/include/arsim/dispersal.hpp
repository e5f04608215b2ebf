#pragma once

#include "arsim/types.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace arsim {

inline constexpr std::size_t kMaxPayloadBytes = 64;

/// A register value: 1..64 payload bytes, compared byte-wise.
class Value {
public:
    Value() = default;
    explicit Value(std::vector<std::uint8_t> bytes);

    static Value from_hex(std::string_view hex);
    std::string to_hex() const;

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::size_t size() const { return bytes_.size(); }
    bool empty() const { return bytes_.empty(); }

    friend bool operator==(const Value&, const Value&) = default;

private:
    std::vector<std::uint8_t> bytes_;
};

/// One coded share of a value, destined for object `index`.
struct Block {
    Label label;
    ObjectIndex index = 0;
    std::vector<std::uint16_t> share;  // elements of GF(257), one per payload byte

    friend bool operator==(const Block&, const Block&) = default;
};

struct CodecParams {
    std::size_t n = 1;
    std::size_t tau = 1;

    void validate() const;
};

class CodecError : public std::runtime_error {
public:
    enum class Kind { InvalidParams, InsufficientBlocks, MixedLabels, DuplicateIndex, InvalidBlock };

    CodecError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Threshold dispersal: `split` yields n blocks, any tau of which `combine`
/// back into the value.
class Codec {
public:
    virtual ~Codec() = default;
    virtual std::vector<Block> split(const Value& value, const Label& label,
                                     const CodecParams& params) const = 0;
    virtual Value combine(std::span<const Block> blocks, const CodecParams& params) const = 0;
    virtual std::string_view name() const = 0;
};

/// Shamir sharing of each payload byte over GF(257), evaluated at x = index.
/// Polynomial coefficients come from a deterministic stream keyed by
/// (label, n, tau).
class ShamirCodec final : public Codec {
public:
    std::vector<Block> split(const Value& value, const Label& label,
                             const CodecParams& params) const override;
    Value combine(std::span<const Block> blocks, const CodecParams& params) const override;
    std::string_view name() const override { return "shamir-gf257"; }
};

const Codec& default_codec();

std::vector<Block> split(const Value& value, const Label& label, const CodecParams& params);
Value combine(std::span<const Block> blocks, const CodecParams& params);

namespace gf257 {

inline constexpr std::uint32_t kPrime = 257;

constexpr std::uint32_t add(std::uint32_t a, std::uint32_t b) { return (a + b) % kPrime; }
constexpr std::uint32_t sub(std::uint32_t a, std::uint32_t b) { return (a + kPrime - b) % kPrime; }
constexpr std::uint32_t mul(std::uint32_t a, std::uint32_t b) { return (a * b) % kPrime; }
std::uint32_t inv(std::uint32_t a);

}  // namespace gf257

}  // namespace arsim

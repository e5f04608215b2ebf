#include "arsim/dispersal.hpp"

#include "gf_oracle.hpp"

#include <doctest.h>

#include <span>

using namespace arsim;

namespace {

std::vector<Block> pick(const std::vector<Block>& blocks, const std::vector<std::size_t>& idx) {
    std::vector<Block> out;
    for (auto i : idx) {
        out.push_back(blocks[i]);
    }
    return out;
}

}  // namespace

TEST_CASE("value hex round trip and payload limits") {
    const auto v = Value::from_hex("00ff10");
    CHECK(v.size() == 3);
    CHECK(v.to_hex() == "00ff10");
    CHECK_THROWS_AS(Value::from_hex(""), std::invalid_argument);
    CHECK_THROWS_AS(Value::from_hex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Value::from_hex("zz"), std::invalid_argument);
    CHECK_THROWS_AS(Value(std::vector<std::uint8_t>(65, 1)), std::invalid_argument);
    CHECK_NOTHROW(Value(std::vector<std::uint8_t>(64, 1)));
}

TEST_CASE("codec parameters are validated") {
    CHECK_THROWS_AS((CodecParams{3, 0}).validate(), CodecError);
    CHECK_THROWS_AS((CodecParams{3, 4}).validate(), CodecError);
    CHECK_THROWS_AS((CodecParams{0, 0}).validate(), CodecError);
    CHECK_NOTHROW((CodecParams{5, 5}).validate());
}

TEST_CASE("every tau-subset reconstructs, every smaller subset is refused") {
    const auto v = Value::from_hex("00017f80feff");
    for (std::size_t n = 1; n <= 7; ++n) {
        for (std::size_t tau = 1; tau <= n; ++tau) {
            CAPTURE(n);
            CAPTURE(tau);
            const CodecParams p{n, tau};
            const auto blocks = split(v, Label{1, 1}, p);
            REQUIRE(blocks.size() == n);
            for (const auto& s : oracle::subsets(n, tau)) {
                CHECK(combine(pick(blocks, s), p) == v);
            }
            if (tau > 1) {
                for (const auto& s : oracle::subsets(n, tau - 1)) {
                    const auto part = pick(blocks, s);
                    CHECK_THROWS_AS(combine(part, p), CodecError);
                }
            }
        }
    }
}

TEST_CASE("shares lie on a polynomial of degree below tau with the byte as constant term") {
    const auto v = Value::from_hex("c3005a");
    for (std::size_t n = 2; n <= 7; ++n) {
        for (std::size_t tau = 1; tau <= n; ++tau) {
            const auto blocks = split(v, Label{2, 5}, {n, tau});
            for (std::size_t byte = 0; byte < v.size(); ++byte) {
                std::vector<std::pair<std::int64_t, std::int64_t>> pts;
                for (std::size_t i = 0; i < tau; ++i) {
                    pts.emplace_back(blocks[i].index, blocks[i].share[byte]);
                }
                const auto coeffs = oracle::interpolate(pts);
                REQUIRE(coeffs.size() == tau);
                CHECK(coeffs[0] == v.bytes()[byte]);
                for (std::size_t i = tau; i < n; ++i) {
                    std::int64_t y = 0;
                    std::int64_t xp = 1;
                    for (auto c : coeffs) {
                        y = (y + c * xp) % 257;
                        xp = xp * blocks[i].index % 257;
                    }
                    CHECK(y == blocks[i].share[byte]);
                }
            }
        }
    }
}

TEST_CASE("fewer than tau shares of one byte leave at least two candidates") {
    for (std::size_t n = 2; n <= 7; ++n) {
        for (std::size_t tau = 2; tau <= n; ++tau) {
            const auto blocks = split(Value::from_hex("9d"), Label{1, 3}, {n, tau});
            for (const auto& s : oracle::subsets(n, tau - 1)) {
                std::vector<std::pair<std::int64_t, std::int64_t>> pts;
                for (auto i : s) {
                    pts.emplace_back(blocks[i].index, blocks[i].share[0]);
                }
                CHECK(oracle::consistent_secrets(pts, tau).size() >= 2);
            }
        }
    }
}

TEST_CASE("combine rejects malformed block sets") {
    const CodecParams p{5, 3};
    const auto a = split(Value::from_hex("11"), Label{1, 1}, p);
    const auto b = split(Value::from_hex("22"), Label{1, 2}, p);
    auto kind = [&](std::vector<Block> blocks) {
        try {
            combine(blocks, p);
        } catch (const CodecError& e) {
            return e.kind();
        }
        FAIL("combine accepted");
        return CodecError::Kind::InvalidParams;
    };
    CHECK(kind({}) == CodecError::Kind::InsufficientBlocks);
    CHECK(kind({a[0], a[1], b[2]}) == CodecError::Kind::MixedLabels);
    CHECK(kind({a[0], a[0], a[1]}) == CodecError::Kind::DuplicateIndex);
    auto bad = a[0];
    bad.index = 9;
    CHECK(kind({bad, a[1], a[2]}) == CodecError::Kind::InvalidBlock);
    CHECK(combine(std::vector<Block>{a[4], a[0], a[2], a[3]}, p) == Value::from_hex("11"));
}

TEST_CASE("split is deterministic per label") {
    const CodecParams p{6, 4};
    const auto v = Value::from_hex("0a0b0c");
    CHECK(split(v, Label{1, 1}, p) == split(v, Label{1, 1}, p));
    CHECK(split(v, Label{1, 1}, p) != split(v, Label{1, 2}, p));
}

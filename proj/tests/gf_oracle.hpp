#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

/// Gaussian elimination over Z/257. Returns one solution of A x = b, or
/// nullopt when the system is inconsistent.
std::optional<std::vector<std::int64_t>> solve_mod257(std::vector<std::vector<std::int64_t>> a,
                                                      std::vector<std::int64_t> b);

/// Coefficients of the unique polynomial of degree < points.size() through
/// `points` (x, y), lowest degree first.
std::vector<std::int64_t> interpolate(const std::vector<std::pair<std::int64_t, std::int64_t>>& points);

/// Byte values s for which some polynomial of degree < tau passes through
/// (0, s) and every point given.
std::vector<int> consistent_secrets(const std::vector<std::pair<std::int64_t, std::int64_t>>& points,
                                    std::size_t tau);

/// All k-subsets of {0, .., n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k);

}  // namespace oracle

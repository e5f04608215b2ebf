#pragma once

#include "arsim/config.hpp"
#include "arsim/oracle.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace arsim {

enum class Column : std::uint8_t { Completeness, WeakAccuracy, CompletenessWeak, StrongAccuracy, CompletenessStrong };

inline constexpr std::array<Column, 5> kColumns = {Column::Completeness, Column::WeakAccuracy,
                                                   Column::CompletenessWeak, Column::StrongAccuracy,
                                                   Column::CompletenessStrong};

std::string_view column_name(Column c);
std::vector<Property> column_properties(Column c);

/// Models in the row order of the bounds table.
inline constexpr std::array<Model, 6> kTableModels = {Model::Fast,        Model::Signed,  Model::Total,
                                                      Model::NonFast,     Model::TotalSigned,
                                                      Model::NonFastSigned};

struct TauResult {
    std::size_t tau = 0;
    std::size_t n = 0;
    std::uint64_t states = 0;
    /// Thresholds surviving the enumeration, per column.
    std::array<std::vector<std::size_t>, 5> satisfying;
};

struct BoundsRow {
    Model model = Model::Fast;
    std::vector<TauResult> per_tau;
    std::array<std::string, 5> cells;  // e.g. "tau>=3", "t>=tau+1", "impossible"
};

struct BoundsOptions {
    std::size_t f = 1;
    std::size_t tau_min = 0;  // 0: f + 1
    std::size_t tau_max = 0;  // 0: 3f + 2, lowered until n <= 7
    std::uint64_t cap = 5'000'000;
    unsigned workers = 0;
};

/// Searches each tau in range with n = tau + 2f and condenses the surviving
/// thresholds into one cell per column.
BoundsRow minimal_bounds(Model model, const BoundsOptions& options);

std::vector<BoundsRow> table1(const BoundsOptions& options);

/// Known bounds for each model, written as cells at the given f.
std::array<std::string, 5> expected_row(Model model, std::size_t f);

std::string render_table(const std::vector<BoundsRow>& rows, std::size_t f);

}  // namespace arsim

#pragma once

#include "arsim/dispersal.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace arsim {

enum class ReadMode : std::uint8_t { Fast, NonFast };

/// How readers authenticate read requests. Generic tokens cover any value;
/// specific tokens name one label and need the two-round read to learn it.
enum class Signing : std::uint8_t { None, Generic, Specific };

struct ModelConfig {
    std::size_t n = 1;
    std::size_t f = 0;
    std::size_t tau = 1;
    std::size_t t = 1;
    ReadMode read_mode = ReadMode::Fast;
    Signing signing = Signing::None;
    bool total_order = false;

    /// Throws std::invalid_argument unless n >= 1, f < n, f < tau <= n,
    /// 1 <= t <= n, and specific signing is paired with two-round reads.
    void validate() const;

    std::size_t quorum_size() const { return n - f; }
    CodecParams codec() const { return {n, tau}; }
};

/// Named model variants used by the CLI and the bound tables.
enum class Model : std::uint8_t { Fast, Signed, Total, TotalSigned, NonFast, NonFastSigned };

inline constexpr Model kAllModels[] = {Model::Fast,        Model::Signed,  Model::Total,
                                       Model::NonFast,     Model::TotalSigned,
                                       Model::NonFastSigned};

std::string_view model_name(Model model);
std::optional<Model> parse_model(std::string_view name);

/// Overwrites the read mode, signing and ordering flags of `cfg`.
void apply_model(ModelConfig& cfg, Model model);
Model model_of(const ModelConfig& cfg);

std::string_view to_string(ReadMode mode);
std::string_view to_string(Signing signing);
std::optional<ReadMode> parse_read_mode(std::string_view s);
std::optional<Signing> parse_signing(std::string_view s);

}  // namespace arsim

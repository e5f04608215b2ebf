#pragma once

#include "arsim/emulation.hpp"

#include <memory>

namespace fixture {

inline constexpr arsim::ProcessId W = 1;
inline constexpr arsim::ProcessId R1 = 2;
inline constexpr arsim::ProcessId R2 = 3;  // faulty reader
inline constexpr arsim::ProcessId A = 4;

inline arsim::ProcessTable processes() {
    using arsim::Role;
    return arsim::ProcessTable({{W, "w", Role::Writer, true},
                                {R1, "r1", Role::Reader, true},
                                {R2, "r2", Role::Reader, false},
                                {A, "a", Role::Auditor, true}});
}

inline arsim::ModelConfig config(std::size_t n, std::size_t tau, arsim::Model model = arsim::Model::Fast,
                                 std::size_t f = 1) {
    arsim::ModelConfig cfg;
    cfg.n = n;
    cfg.f = f;
    cfg.tau = tau;
    cfg.t = 1;
    arsim::apply_model(cfg, model);
    return cfg;
}

inline std::unique_ptr<arsim::Simulation> make(const arsim::ModelConfig& cfg,
                                               std::vector<arsim::FaultScript> scripts = {},
                                               std::uint64_t seed = 1) {
    scripts.resize(cfg.n);
    return std::make_unique<arsim::Simulation>(cfg, std::move(scripts), processes(), seed);
}

inline arsim::ObjectSet all(std::size_t n) {
    arsim::ObjectSet s;
    for (arsim::ObjectIndex k = 1; k <= n; ++k) {
        s.push_back(k);
    }
    return s;
}

}  // namespace fixture

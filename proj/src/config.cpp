#include "arsim/config.hpp"

#include <sstream>
#include <stdexcept>

namespace arsim {

const ProcessInfo* ProcessTable::find(ProcessId id) const {
    for (const auto& p : processes_) {
        if (p.id == id) {
            return &p;
        }
    }
    return nullptr;
}

const ProcessInfo* ProcessTable::find(std::string_view name) const {
    for (const auto& p : processes_) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

std::string ProcessTable::name(ProcessId id) const {
    if (const auto* p = find(id)) {
        return p->name;
    }
    return "p" + std::to_string(id);
}

bool ProcessTable::is_correct(ProcessId id) const {
    const auto* p = find(id);
    return p == nullptr || p->correct;
}

std::string ProcessTable::label_name(const Label& label) const {
    return name(label.writer) + ":" + std::to_string(label.seq);
}

void ModelConfig::validate() const {
    std::ostringstream err;
    if (n < 1) {
        err << "n must be at least 1";
    } else if (f >= n) {
        err << "f must be below n (n=" << n << ", f=" << f << ")";
    } else if (tau <= f || tau > n) {
        err << "need f < tau <= n (n=" << n << ", f=" << f << ", tau=" << tau << ")";
    } else if (t < 1 || t > n) {
        err << "need 1 <= t <= n (n=" << n << ", t=" << t << ")";
    } else if (signing == Signing::Specific && read_mode != ReadMode::NonFast) {
        err << "value-specific signatures require two-round (non_fast) reads";
    } else if (n >= gf257::kPrime) {
        err << "n must be below 257";
    }
    const auto msg = err.str();
    if (!msg.empty()) {
        throw std::invalid_argument(msg);
    }
}

std::string_view model_name(Model model) {
    switch (model) {
        case Model::Fast: return "fast";
        case Model::Signed: return "signed";
        case Model::Total: return "total";
        case Model::TotalSigned: return "total-signed";
        case Model::NonFast: return "nonfast";
        case Model::NonFastSigned: return "nonfast-signed";
    }
    return "?";
}

std::optional<Model> parse_model(std::string_view name) {
    for (Model m : kAllModels) {
        if (model_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

void apply_model(ModelConfig& cfg, Model model) {
    cfg.read_mode = ReadMode::Fast;
    cfg.signing = Signing::None;
    cfg.total_order = false;
    switch (model) {
        case Model::Fast: break;
        case Model::Signed: cfg.signing = Signing::Generic; break;
        case Model::Total: cfg.total_order = true; break;
        case Model::TotalSigned:
            cfg.total_order = true;
            cfg.signing = Signing::Generic;
            break;
        case Model::NonFast: cfg.read_mode = ReadMode::NonFast; break;
        case Model::NonFastSigned:
            cfg.read_mode = ReadMode::NonFast;
            cfg.signing = Signing::Specific;
            break;
    }
}

Model model_of(const ModelConfig& cfg) {
    if (cfg.read_mode == ReadMode::NonFast) {
        return cfg.signing == Signing::Specific ? Model::NonFastSigned : Model::NonFast;
    }
    if (cfg.total_order) {
        return cfg.signing == Signing::None ? Model::Total : Model::TotalSigned;
    }
    return cfg.signing == Signing::None ? Model::Fast : Model::Signed;
}

std::string_view to_string(ReadMode mode) {
    return mode == ReadMode::Fast ? "fast" : "non_fast";
}

std::string_view to_string(Signing signing) {
    switch (signing) {
        case Signing::None: return "none";
        case Signing::Generic: return "generic";
        case Signing::Specific: return "specific";
    }
    return "?";
}

std::optional<ReadMode> parse_read_mode(std::string_view s) {
    if (s == "fast") {
        return ReadMode::Fast;
    }
    if (s == "non_fast" || s == "nonfast") {
        return ReadMode::NonFast;
    }
    return std::nullopt;
}

std::optional<Signing> parse_signing(std::string_view s) {
    if (s == "none") {
        return Signing::None;
    }
    if (s == "generic") {
        return Signing::Generic;
    }
    if (s == "specific") {
        return Signing::Specific;
    }
    return std::nullopt;
}

}  // namespace arsim

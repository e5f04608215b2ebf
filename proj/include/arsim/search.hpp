#pragma once

#include "arsim/config.hpp"
#include "arsim/oracle.hpp"
#include "arsim/scenario.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace arsim {

class SearchSpaceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adversary space over a fixed skeleton: write v everywhere, optionally
/// write x to an early subset, the reads, deliver x to the rest, audit.
/// Exactly f objects are faulty and exactly f objects sit outside the
/// auditing quorum.
struct SearchSpace {
    std::size_t n = 4;
    std::size_t f = 1;
    std::size_t tau = 3;
    Model model = Model::Fast;
    std::size_t readers = 1;  // 1 or 2
    std::optional<std::size_t> t;  // only this threshold; default every t in [1, n]
    bool symmetry = true;
    std::uint64_t cap = 5'000'000;
    unsigned workers = 0;  // 0: hardware concurrency
    WeakAccuracyMode weak_accuracy = WeakAccuracyMode::ReaderLevel;

    ModelConfig config(std::size_t t) const;
    void validate() const;
};

enum class ReaderRole : std::uint8_t { Absent, Correct, Faulty };

struct ObjectChoice {
    bool faulty = false;
    bool in_quorum = true;
    bool early = false;  // receives x before the reads
    std::vector<bool> targeted;  // per reader; meaningful for faulty readers
    bool omit_blocks = false;
    bool omit_records = false;
    bool fabricate = false;

    friend bool operator==(const ObjectChoice&, const ObjectChoice&) = default;
};

struct Adversary {
    std::vector<ReaderRole> roles;
    bool has_x = false;
    bool x_before_reads = false;  // total order only
    std::vector<bool> request_x;  // per reader; two-round faulty readers only
    std::vector<ObjectChoice> objects;
};

Scenario build_scenario(const SearchSpace& space, const Adversary& adv, std::size_t t);

struct Counterexample {
    std::uint64_t ordinal = 0;
    std::size_t t = 0;
    PropertyVerdict verdict;
    std::size_t records = 0;  // attesting objects of the witness pair
    Scenario scenario;
};

struct SearchResult {
    std::uint64_t states_explored = 0;
    std::vector<std::size_t> thresholds;  // the t values evaluated
    /// First counterexample in enumeration order per (property, t).
    std::map<std::pair<Property, std::size_t>, Counterexample> first;

    bool holds(Property p, std::size_t t) const { return !first.contains({p, t}); }
    bool holds_all(const std::vector<Property>& ps, std::size_t t) const;
    /// Thresholds at which every property in `ps` survives the enumeration.
    std::vector<std::size_t> satisfying(const std::vector<Property>& ps) const;
};

/// Runs the whole enumeration once and evaluates every property at every
/// threshold. Throws SearchSpaceTooLarge when the closed-form count exceeds
/// the cap.
SearchResult explore(const SearchSpace& space);

struct ViolationResult {
    bool violated = false;
    std::uint64_t states_explored = 0;
    /// When violated: for each evaluated t, the earliest adversary that breaks
    /// one of the properties at that t.
    std::map<std::size_t, Counterexample> counterexamples;
    std::optional<Counterexample> counterexample;  // the one at the smallest t
};

/// A property set is violated when no evaluated threshold satisfies all of
/// its members against every enumerated adversary.
ViolationResult find_violation(const SearchSpace& space, const std::vector<Property>& properties);

/// Number of adversaries the enumeration visits, from the product of choice
/// cardinalities.
std::uint64_t closed_form_count(const SearchSpace& space);

/// Visits every adversary in enumeration order; used by tests to check
/// completeness of the enumeration.
std::uint64_t enumerate(const SearchSpace& space, const std::function<void(std::uint64_t, const Adversary&)>& visit);

/// Scenario file for a counterexample, with its failing verdict as the
/// expectation so `run` replays it to a match.
nlohmann::json counterexample_to_json(const Counterexample& c);

}  // namespace arsim

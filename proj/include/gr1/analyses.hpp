#pragma once

// Debugging analyses over a bit-blasted specification. Each analysis builds
// its games in a private manager, so analyses may run concurrently.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gr1/bdd.hpp"
#include "gr1/boolean_spec.hpp"
#include "gr1/game.hpp"

namespace gr1 {

struct AnalysisConfig {
    Semantics semantics = Semantics::Strict;
    bool robotics = false;
    std::size_t max_cubes = 10;
    long max_k = 16;
    /// Safety assumptions (ordinals among the written ones) that never glitch.
    std::vector<std::size_t> glitch_free;
    bdd::ManagerOptions manager;
};

/// Solved game in a fresh manager.
struct SolvedGame {
    SymbolicGame game;
    WinningRegion region;
    bool realizable = false;
};
SolvedGame solve_spec(const BooleanSpec& spec, const AnalysisConfig& config,
                      std::shared_ptr<bdd::Manager> mgr = nullptr);

struct SemanticsResult {
    bool strict = false;
    bool nonstrict = false;
    bool differs = false;
};
SemanticsResult compare_semantics(const BooleanSpec& spec, const AnalysisConfig& config);

/// Cube over unprimed variables of the untransformed spec.
using PositionCube = bdd::Cube;

struct PositionClass {
    bdd::BigInt total;
    bdd::BigInt winning;
};

struct PositionStats {
    PositionClass all, env_init, sys_init, both_init;
    std::vector<PositionCube> winning_cubes;
    std::vector<PositionCube> losing_cubes;
};
/// Positions are valuations of the declared variables (integer encodings
/// outside their range are not positions).
PositionStats position_statistics(const BooleanSpec& spec, const AnalysisConfig& config);

struct RegionSummary {
    bdd::BigInt count;
    std::vector<PositionCube> cubes;
};
/// Positions from which the system can force an assumption violation.
RegionSummary assumption_falsification(const BooleanSpec& spec, const AnalysisConfig& config);

struct AssumptionVerdict {
    PartKind kind;
    std::size_t index;  // in the spec's part list
    std::string text;
    bool test_a = false;
    bool test_b = false;
    std::vector<bool> test_c;  // per system goal
    std::vector<bool> test_d;
    bool any_c() const;
    bool any_d() const;
    bool useful() const { return test_a || test_b || any_c() || any_d(); }
};
/// Throws PreconditionError when the spec is unrealizable.
std::vector<AssumptionVerdict> classify_assumptions(const BooleanSpec& spec, const AnalysisConfig& config);

struct ResilienceResult {
    enum class Kind { Finite, Unbounded, AtLeast };
    Kind kind = Kind::Finite;
    long level = 0;  // for Finite and AtLeast
    std::vector<bool> realizable_at;  // per tested budget, from 0
};
/// Largest glitch budget up to max_k under which the spec stays realizable.
/// Throws PreconditionError when the spec is unrealizable.
ResilienceResult error_resilience(const BooleanSpec& spec, const AnalysisConfig& config);

/// Output signals: boolean outputs and integer outputs by name.
std::vector<std::string> output_signals(const BooleanSpec& spec);
std::vector<std::string> input_signals(const BooleanSpec& spec);
/// Propositions of a signal (the bits of an integer).
std::vector<int> signal_props(const BooleanSpec& spec, const std::string& name);

struct PrecommitResult {
    std::vector<std::pair<std::string, bool>> per_output;
    std::vector<std::string> maximal_set;
};
/// Throws PreconditionError when the spec is unrealizable.
PrecommitResult precommit_analysis(const BooleanSpec& spec, const AnalysisConfig& config);
bool realizable_with_precommit(const BooleanSpec& spec, const AnalysisConfig& config,
                               const std::vector<std::string>& signals);

struct StuckAtEntry {
    std::string signal;
    bool value;
    bool realizable;
};
struct StuckAtTable {
    bool outputs = true;  // direction: outputs for realizable specs, inputs otherwise
    std::vector<StuckAtEntry> entries;
};
/// Boolean signals only; integer signals have no single stuck-at value.
StuckAtTable stuck_at_analysis(const BooleanSpec& spec, const AnalysisConfig& config);
BooleanSpec with_stuck_signal(const BooleanSpec& spec, int prop, bool value);

}  // namespace gr1

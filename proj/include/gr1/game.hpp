#pragma once

// Symbolic GR(1) games: construction, the three-nested fixpoint, realizability
// and strategy extraction.

#include <memory>
#include <optional>
#include <vector>

#include "gr1/bdd.hpp"
#include "gr1/boolean_spec.hpp"

namespace gr1 {

enum class Semantics { Strict, NonStrict };

class SymbolicGame {
public:
    std::shared_ptr<bdd::Manager> mgr;
    /// The spec the game encodes (after the non-strict transformation).
    BooleanSpec spec;
    Semantics semantics = Semantics::Strict;
    bool robotics = false;
    int env_violated = -1;
    int sys_violated = -1;

    bdd::Bdd init_env, init_sys, trans_env, trans_sys;
    /// Goals are predicates over a transition. A system goal without primed
    /// variables holds when the transition starts in it; an environment goal
    /// without primed variables holds when the transition ends in it.
    std::vector<bdd::Bdd> live_env, live_sys;
    /// Encodings that denote declared integer values, over unprimed variables.
    bdd::Bdd domain;

    bdd::VarSet inputs, outputs, inputs_primed, outputs_primed, unprimed, primed;

    /// Positions of the untransformed spec: restricts the trackers to false
    /// and removes them. Identity for strict games.
    bdd::Bdd base_positions(const bdd::Bdd& positions) const;
    /// Variables of the untransformed spec positions.
    bdd::VarSet base_unprimed() const;
};

/// Registers the propositions of spec with mgr. Existing propositions must
/// match the spec's leading propositions by name; missing ones are appended.
void ensure_propositions(bdd::Manager& mgr, const BooleanSpec& spec);

/// With mgr null a fresh manager is created using options.
SymbolicGame build_game(const BooleanSpec& spec, Semantics semantics = Semantics::Strict, bool robotics = false,
                        std::shared_ptr<bdd::Manager> mgr = nullptr, bdd::ManagerOptions options = {});

struct SolveOptions {
    /// Output propositions whose next value is fixed before the next input
    /// is observed.
    std::vector<int> precommit;
};

struct WinningRegion {
    bdd::Bdd win;
    /// strata[j][d]: positions with reactive distance at most d to goal j.
    std::vector<std::vector<bdd::Bdd>> strata;
    /// x_sets[j][d][i]: inner greatest fixpoint for env goal i while
    /// computing strata[j][d], from the final outer iteration.
    std::vector<std::vector<std::vector<bdd::Bdd>>> x_sets;
    SolveOptions options;
};

/// Controllable predecessor: positions from which the system can force the
/// next transition into T (a predicate over unprimed and primed variables)
/// or the environment breaks trans_env.
bdd::Bdd cpre(const SymbolicGame& game, const bdd::Bdd& target, const SolveOptions& options = {});

WinningRegion solve_game(const SymbolicGame& game, const SolveOptions& options = {});

bool check_realizability(const SymbolicGame& game, const WinningRegion& region);

/// Smallest d with position in strata[goal][d]; nullopt means infinity.
/// position is indexed by proposition.
std::optional<std::size_t> reactive_distance(const SymbolicGame& game, const WinningRegion& region,
                                             const std::vector<bool>& position, std::size_t goal);

struct MealyState {
    std::vector<bool> valuation;  // indexed by proposition
    std::size_t goal = 0;
};

struct MealyTransition {
    std::size_t from;
    std::vector<bool> input;  // indexed like SymbolicGame::inputs
    std::size_t to;
};

struct MealyMachine {
    std::vector<int> input_props;
    std::vector<int> output_props;
    std::vector<MealyState> states;
    std::vector<std::size_t> initial;
    std::vector<MealyTransition> transitions;
    /// Successor lookup; nullopt when the input is not admissible.
    std::optional<std::size_t> successor(std::size_t state, const std::vector<bool>& input) const;
};

struct Strategy {
    /// Deterministic move relation per goal over unprimed and primed variables.
    std::vector<bdd::Bdd> relation;
    /// Initial positions the machine may start in.
    bdd::Bdd initial;
    /// reachable[j]: positions reachable while pursuing goal j.
    std::vector<bdd::Bdd> reachable;
};

/// Throws PreconditionError when the game is unrealizable.
Strategy extract_strategy(const SymbolicGame& game, const WinningRegion& region);
/// Explicit machine over the reachable part of the strategy. Throws
/// ResourceLimit beyond max_states.
MealyMachine build_machine(const SymbolicGame& game, const Strategy& strategy, std::size_t max_states = 200000);

/// Enumerates the total assignments of f over vars in lexicographic order
/// (false before true, in variable order).
std::vector<std::vector<bool>> enumerate_assignments(bdd::Manager& mgr, const bdd::Bdd& f, const bdd::VarSet& vars);

}  // namespace gr1

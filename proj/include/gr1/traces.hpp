#pragma once

// Nominal-case traces and round-indexed abstract (counter-)strategies.

#include <optional>
#include <string>
#include <vector>

#include "gr1/boolean_spec.hpp"
#include "gr1/game.hpp"

namespace gr1 {

struct TraceStep {
    std::vector<bool> valuation;  // indexed by proposition
    std::size_t env_goal = 0;     // goals pursued on the transition leaving this step
    std::size_t sys_goal = 0;
};

struct AnnotatedTrace {
    enum class Status { Ok, NoInitialPosition, EnvironmentStuck };
    Status status = Status::Ok;
    std::string finding;  // set unless Ok
    std::vector<TraceStep> steps;
    /// The last step moves back to steps[*lasso_start]; nullopt when the
    /// step bound was reached first.
    std::optional<std::size_t> lasso_start;
};

struct TraceOptions {
    Semantics semantics = Semantics::Strict;
    bool robotics = false;
    std::size_t max_steps = 64;
    std::size_t max_states = 200000;
    bdd::ManagerOptions manager;
};

/// The environment meets its liveness assumptions by goal rotation, taking
/// the smallest distance-minimal input; the system follows its extracted
/// strategy. Throws PreconditionError when the spec is unrealizable.
AnnotatedTrace nominal_trace(const BooleanSpec& spec, const TraceOptions& options = {});

enum class Player { System, Environment };

struct AbstractCell {
    enum class Kind { Value, Star, Violation };
    Kind kind = Kind::Value;
    long value = 0;  // 0/1 for booleans
    bool operator==(const AbstractCell&) const = default;
};

struct AbstractRow {
    std::string signal;
    bool integer = false;
    Player owner = Player::System;
    std::vector<AbstractCell> cells;  // per round; the last round is all violations
};

struct AbstractStrategy {
    Player winner = Player::System;
    std::size_t horizon = 0;  // round in which the loser's violation shows
    std::vector<AbstractRow> rows;  // signals in declaration order
};

struct AbstractOptions {
    std::size_t max_rounds = 64;
    bdd::ManagerOptions manager;
};

/// Strategy for the player who wins on safety parts alone, or nullopt when
/// neither does. Throws ResourceLimit when the win needs more than
/// max_rounds rounds.
std::optional<AbstractStrategy> abstract_strategy(const BooleanSpec& spec, const AbstractOptions& options = {});

}  // namespace gr1

#pragma once

// Explicit-state reference implementations. Everything here enumerates
// positions and evaluates formulas directly; no decision diagrams are used.

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gr1/boolean_spec.hpp"
#include "gr1/game.hpp"

namespace gr1::oracle {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

/// A predicate over (position, successor) tabulated per position.
struct StepTable {
    enum class Mode { Source, Target, Step };
    Mode mode = Mode::Source;
    std::vector<bool> now;     // Source: positions satisfying it
    Bitset target;             // Target: successors satisfying it
    std::vector<Bitset> next;  // Step: successors satisfying it, per position
    /// Successors satisfying the predicate from position s.
    Bitset at(std::size_t s, std::size_t size) const;
    bool holds(std::size_t s, std::size_t t) const;
};

/// Positions are indexed as (inputs << output_count) | outputs, with input k
/// (resp. output k) in bit k of its half, following proposition order.
class ExplicitGame {
public:
    explicit ExplicitGame(const BooleanSpec& spec, std::size_t bit_bound = 14);

    const BooleanSpec& spec() const { return spec_; }
    std::size_t size() const { return std::size_t{1} << (inputs_.size() + outputs_.size()); }
    std::size_t input_count() const { return inputs_.size(); }
    std::size_t output_count() const { return outputs_.size(); }
    std::size_t input_part(std::size_t pos) const { return pos >> outputs_.size(); }

    std::vector<bool> valuation(std::size_t pos) const;
    std::size_t index(const std::vector<bool>& valuation) const;

    std::vector<bool> init_env, init_sys;
    StepTable trans_env, trans_sys;
    std::vector<StepTable> live_env, live_sys;

private:
    /// on_target: a predicate without primed variables is read on the
    /// successor instead of the current position.
    StepTable tabulate(const Formula& f, bool on_target = false) const;

    BooleanSpec spec_;
    std::vector<int> inputs_, outputs_;
    std::vector<Bitset> patterns_;  // by proposition: positions where it holds
};

struct ExplicitSolution {
    Bitset win;
    /// distance[j][pos]: stratum index for goal j, nullopt outside the region.
    std::vector<std::vector<std::optional<std::size_t>>> distance;
    bool realizable = false;
};

/// Throws PreconditionError when the spec has more than bit_bound propositions.
ExplicitSolution explicit_solve(const BooleanSpec& spec, bool robotics = false, std::size_t bit_bound = 14);
ExplicitSolution explicit_solve(const ExplicitGame& game, bool robotics = false);

/// Safety game in which the environment tries to force a guarantee violation
/// while respecting the safety assumptions. rank[pos] is the number of
/// environment moves needed; nullopt when the system can stay safe forever.
std::vector<std::optional<std::size_t>> safety_ranks(const ExplicitGame& game);

struct ModelCheckResult {
    enum class Kind { Pass, Initial, Safety, MissingMove, Liveness };
    Kind kind = Kind::Pass;
    /// Machine states leading to the violation; for Liveness, prefix then the
    /// cycle (whose first state repeats at the end).
    std::vector<std::size_t> prefix;
    std::vector<std::size_t> cycle;
    std::string detail;
    bool pass() const { return kind == Kind::Pass; }
};

/// Checks every behaviour of the machine against the spec. Throws
/// std::invalid_argument on a signature mismatch.
ModelCheckResult model_check(const MealyMachine& machine, const BooleanSpec& spec, bool robotics = false);

}  // namespace gr1::oracle

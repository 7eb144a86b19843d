#include <algorithm>
#include <map>
#include <stdexcept>

#include "gr1/errors.hpp"
#include "gr1/game.hpp"

namespace gr1 {

using bdd::Bdd;
using bdd::VarSet;

namespace {

// Keeps, for every assignment of the other variables, only the
// lexicographically smallest assignment of vars (false first, in order).
Bdd determinize(bdd::Manager& m, Bdd rel, const VarSet& vars) {
    for (std::size_t k = 0; k < vars.size(); ++k) {
        VarSet rest(vars.begin() + static_cast<std::ptrdiff_t>(k), vars.end());
        const Bdd zero = !m.var(vars[k]);
        const Bdd zero_possible = m.exists(rest, rel & zero);
        rel &= !zero_possible | zero;
    }
    return rel;
}

bdd::Cube cube_of_valuation(const std::vector<bool>& valuation) {
    bdd::Cube c;
    for (std::size_t p = 0; p < valuation.size(); ++p) {
        c.emplace_back(bdd::unprimed_var(static_cast<int>(p)), valuation[p]);
    }
    return c;
}

}  // namespace

Strategy extract_strategy(const SymbolicGame& game, const WinningRegion& region) {
    if (!region.options.precommit.empty()) {
        throw PreconditionError("strategy extraction needs a region solved without precommitment");
    }
    if (!check_realizability(game, region)) throw PreconditionError("specification is unrealizable");
    bdd::Manager& m = *game.mgr;
    const Bdd z_primed = m.prime(region.win);
    const std::size_t goals = game.live_sys.size();

    Strategy s;
    for (std::size_t j = 0; j < goals; ++j) {
        Bdd covered = m.bdd_false();
        Bdd rel = m.bdd_false();
        const auto& levels = region.strata[j];
        for (std::size_t r = 0; r < levels.size(); ++r) {
            const Bdd lower = r == 0 ? m.bdd_false() : m.prime(levels[r - 1]);
            const Bdd progress = (game.live_sys[j] & z_primed) | lower;
            for (std::size_t i = 0; i < game.live_env.size(); ++i) {
                const Bdd& x = region.x_sets[j][r][i];
                const Bdd move = game.trans_sys & (progress | (!game.live_env[i] & m.prime(x)));
                rel |= (x & !covered) & move;
                covered |= x;
            }
        }
        s.relation.push_back(determinize(m, rel, game.outputs_primed));
    }

    if (game.robotics) {
        s.initial = game.init_env & game.init_sys;
    } else {
        s.initial = game.init_env & determinize(m, game.init_sys & region.win, game.outputs);
    }

    s.reachable.assign(goals, m.bdd_false());
    s.reachable[0] = s.initial;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < goals; ++j) {
            const Bdd step = s.reachable[j] & game.trans_env & s.relation[j];
            const Bdd stay = m.unprime(m.exists(game.unprimed, step & !game.live_sys[j]));
            const Bdd advance = m.unprime(m.exists(game.unprimed, step & game.live_sys[j]));
            const std::size_t next = (j + 1) % goals;
            const Bdd grown_here = s.reachable[j] | stay;
            if (grown_here != s.reachable[j]) {
                s.reachable[j] = grown_here;
                changed = true;
            }
            const Bdd grown_next = s.reachable[next] | advance;
            if (grown_next != s.reachable[next]) {
                s.reachable[next] = grown_next;
                changed = true;
            }
        }
    }
    return s;
}

std::optional<std::size_t> MealyMachine::successor(std::size_t state, const std::vector<bool>& input) const {
    auto it = std::lower_bound(transitions.begin(), transitions.end(), state,
                               [](const MealyTransition& t, std::size_t s) { return t.from < s; });
    for (; it != transitions.end() && it->from == state; ++it) {
        if (it->input == input) return it->to;
    }
    return std::nullopt;
}

MealyMachine build_machine(const SymbolicGame& game, const Strategy& strategy, std::size_t max_states) {
    bdd::Manager& m = *game.mgr;
    const std::size_t n = game.spec.props.size();
    MealyMachine machine;
    for (int v : game.inputs) machine.input_props.push_back(v / 2);
    for (int v : game.outputs) machine.output_props.push_back(v / 2);

    std::map<std::pair<std::vector<bool>, std::size_t>, std::size_t> index;
    auto intern = [&](const std::vector<bool>& valuation, std::size_t goal) {
        auto [it, fresh] = index.try_emplace({valuation, goal}, machine.states.size());
        if (fresh) {
            if (machine.states.size() >= max_states) {
                throw ResourceLimit("strategy has more than " + std::to_string(max_states) + " states");
            }
            machine.states.push_back({valuation, goal});
        }
        return it->second;
    };

    for (const auto& v : enumerate_assignments(m, strategy.initial, game.unprimed)) {
        machine.initial.push_back(intern(v, 0));
    }

    for (std::size_t s = 0; s < machine.states.size(); ++s) {
        const std::vector<bool> valuation = machine.states[s].valuation;
        const std::size_t goal = machine.states[s].goal;
        const bdd::Cube here = cube_of_valuation(valuation);
        const Bdd admissible = m.restrict(game.trans_env, here);
        const Bdd rel = m.restrict(strategy.relation[goal], here);
        for (const auto& input : enumerate_assignments(m, admissible, game.inputs_primed)) {
            bdd::Cube in_cube;
            for (std::size_t k = 0; k < input.size(); ++k) in_cube.emplace_back(game.inputs_primed[k], input[k]);
            auto out = m.min_assignment(m.restrict(rel, in_cube), game.outputs_primed);
            if (!out) throw std::logic_error("strategy has no move for an admissible input");

            std::vector<bool> next(n);
            for (auto [var, value] : in_cube) next[static_cast<std::size_t>(var / 2)] = value;
            for (auto [var, value] : *out) next[static_cast<std::size_t>(var / 2)] = value;
            std::vector<bool> vars(2 * n);
            for (std::size_t p = 0; p < n; ++p) {
                vars[2 * p] = valuation[p];
                vars[2 * p + 1] = next[p];
            }
            const bool reached = m.eval(game.live_sys[goal], vars);
            const std::size_t next_goal = reached ? (goal + 1) % game.live_sys.size() : goal;
            const std::size_t to = intern(next, next_goal);
            machine.transitions.push_back({s, input, to});
        }
    }
    return machine;
}

}  // namespace gr1

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gr1/game.hpp"

namespace gr1 {

using bdd::Bdd;
using bdd::VarSet;

void ensure_propositions(bdd::Manager& mgr, const BooleanSpec& spec) {
    const auto existing = static_cast<std::size_t>(mgr.proposition_count());
    for (std::size_t p = 0; p < spec.props.size(); ++p) {
        if (p < existing) {
            if (mgr.var_name(bdd::unprimed_var(static_cast<int>(p))) != spec.props[p].name) {
                throw std::invalid_argument("manager proposition " + std::to_string(p) + " is '" +
                                            mgr.var_name(bdd::unprimed_var(static_cast<int>(p))) +
                                            "', spec has '" + spec.props[p].name + "'");
            }
        } else {
            mgr.new_proposition(spec.props[p].name);
        }
    }
}

SymbolicGame build_game(const BooleanSpec& input, Semantics semantics, bool robotics,
                        std::shared_ptr<bdd::Manager> mgr, bdd::ManagerOptions options) {
    SymbolicGame g;
    g.semantics = semantics;
    g.robotics = robotics;
    if (semantics == Semantics::NonStrict) {
        NonStrictSpec ns = make_nonstrict(input);
        g.spec = std::move(ns.spec);
        g.env_violated = ns.env_violated;
        g.sys_violated = ns.sys_violated;
    } else {
        g.spec = input;
    }
    g.mgr = mgr ? std::move(mgr) : std::make_shared<bdd::Manager>(options);
    ensure_propositions(*g.mgr, g.spec);
    bdd::Manager& m = *g.mgr;

    g.init_env = to_bdd(m, g.spec.conjunction(PartKind::EnvInit));
    g.init_sys = to_bdd(m, g.spec.conjunction(PartKind::SysInit));
    g.trans_env = to_bdd(m, g.spec.conjunction(PartKind::EnvTrans));
    g.trans_sys = to_bdd(m, g.spec.conjunction(PartKind::SysTrans));
    // The environment meets a state goal through the position it moves to.
    for (const auto& p : g.spec.list(PartKind::EnvLiveness)) {
        const Bdd goal = to_bdd(m, p.pred);
        g.live_env.push_back(p.pred.mentions_primed() ? goal : m.prime(goal));
    }
    for (const auto& p : g.spec.list(PartKind::SysLiveness)) g.live_sys.push_back(to_bdd(m, p.pred));
    if (g.live_env.empty()) g.live_env.push_back(m.bdd_true());
    if (g.live_sys.empty()) g.live_sys.push_back(m.bdd_true());
    g.domain = to_bdd(m, g.spec.domain());

    for (std::size_t p = 0; p < g.spec.props.size(); ++p) {
        const int u = bdd::unprimed_var(static_cast<int>(p));
        const int v = bdd::primed_var(static_cast<int>(p));
        const bool in = g.spec.props[p].kind == VarKind::Input;
        (in ? g.inputs : g.outputs).push_back(u);
        (in ? g.inputs_primed : g.outputs_primed).push_back(v);
        g.unprimed.push_back(u);
        g.primed.push_back(v);
    }
    return g;
}

Bdd SymbolicGame::base_positions(const Bdd& positions) const {
    if (semantics == Semantics::Strict) return positions;
    return mgr->restrict(positions, {{bdd::unprimed_var(env_violated), false},
                                     {bdd::unprimed_var(sys_violated), false}});
}

VarSet SymbolicGame::base_unprimed() const {
    VarSet out;
    for (int v : unprimed) {
        if (semantics == Semantics::NonStrict &&
            (v == bdd::unprimed_var(env_violated) || v == bdd::unprimed_var(sys_violated))) {
            continue;
        }
        out.push_back(v);
    }
    return out;
}

Bdd cpre(const SymbolicGame& game, const Bdd& target, const SolveOptions& options) {
    bdd::Manager& m = *game.mgr;
    if (options.precommit.empty()) {
        Bdd reply = m.and_exists(game.trans_sys, target, game.outputs_primed);
        return !m.and_exists(game.trans_env, !reply, game.inputs_primed);
    }
    VarSet fixed, late;
    for (int v : game.outputs_primed) {
        const int prop = v / 2;
        const bool pre =
            std::find(options.precommit.begin(), options.precommit.end(), prop) != options.precommit.end();
        (pre ? fixed : late).push_back(v);
    }
    Bdd reply = m.and_exists(game.trans_sys, target, late);
    Bdd for_all_inputs = !m.and_exists(game.trans_env, !reply, game.inputs_primed);
    return m.exists(fixed, for_all_inputs);
}

WinningRegion solve_game(const SymbolicGame& game, const SolveOptions& options) {
    bdd::Manager& m = *game.mgr;
    WinningRegion region;
    region.options = options;
    Bdd z = m.bdd_true();
    while (true) {
        Bdd z_next = m.bdd_true();
        std::vector<std::vector<Bdd>> strata;
        std::vector<std::vector<std::vector<Bdd>>> x_sets;
        const Bdd z_primed = m.prime(z);
        for (const Bdd& goal : game.live_sys) {
            Bdd y = m.bdd_false();
            std::vector<Bdd> levels;
            std::vector<std::vector<Bdd>> level_x;
            while (true) {
                const Bdd start = (goal & z_primed) | m.prime(y);
                Bdd y_next = m.bdd_false();
                std::vector<Bdd> xs;
                for (const Bdd& assumption : game.live_env) {
                    Bdd x = m.bdd_true();
                    while (true) {
                        Bdd x_next = cpre(game, start | (!assumption & m.prime(x)), options);
                        if (x_next == x) break;
                        x = x_next;
                    }
                    xs.push_back(x);
                    y_next |= x;
                }
                if (y_next == y) break;
                y = y_next;
                levels.push_back(y);
                level_x.push_back(std::move(xs));
            }
            z_next &= y;
            strata.push_back(std::move(levels));
            x_sets.push_back(std::move(level_x));
        }
        if (z_next == z) {
            region.win = z;
            region.strata = std::move(strata);
            region.x_sets = std::move(x_sets);
            return region;
        }
        z = z_next;
    }
}

bool check_realizability(const SymbolicGame& game, const WinningRegion& region) {
    bdd::Manager& m = *game.mgr;
    if (game.robotics) {
        return (game.init_env & game.init_sys & !region.win).is_false();
    }
    Bdd answer = m.and_exists(game.init_sys, region.win, game.outputs);
    return (game.init_env & !answer).is_false();
}

std::optional<std::size_t> reactive_distance(const SymbolicGame& game, const WinningRegion& region,
                                             const std::vector<bool>& position, std::size_t goal) {
    if (goal >= region.strata.size()) throw std::out_of_range("goal index");
    bdd::Cube cube;
    for (std::size_t p = 0; p < game.spec.props.size(); ++p) {
        cube.emplace_back(bdd::unprimed_var(static_cast<int>(p)), position[p]);
    }
    const auto& levels = region.strata[goal];
    for (std::size_t d = 0; d < levels.size(); ++d) {
        if (game.mgr->restrict(levels[d], cube).is_true()) return d;
    }
    return std::nullopt;
}

std::vector<std::vector<bool>> enumerate_assignments(bdd::Manager& mgr, const Bdd& f, const VarSet& vars) {
    std::vector<std::vector<bool>> out;
    std::vector<bool> current(vars.size());
    auto rec = [&](auto&& self, const Bdd& g, std::size_t k) -> void {
        if (g.is_false()) return;
        if (k == vars.size()) {
            out.push_back(current);
            return;
        }
        for (bool b : {false, true}) {
            current[k] = b;
            self(self, mgr.restrict(g, {{vars[k], b}}), k + 1);
        }
    };
    rec(rec, f, 0);
    return out;
}

}  // namespace gr1

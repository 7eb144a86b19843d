#include "gr1/errors.hpp"
#include "gr1/traces.hpp"

namespace gr1 {

using bdd::Bdd;

namespace {

// Finite-horizon safety game for one winner. Round constraints restrict the
// winner's propositions in that round (unprimed); the loser is free.
class RoundGame {
public:
    RoundGame(const SymbolicGame& g, Player winner) : g_(g), m_(*g.mgr), winner_(winner) {}

    // Positions from which the winner forces the loser's violation on the
    // move into the next round, given the winner's constraint there.
    Bdd step(const Bdd& target, const Bdd& next_constraint) {
        const Bdd t = m_.prime(target);
        const Bdd c = m_.prime(next_constraint);
        if (winner_ == Player::Environment) {
            const Bdd loser_stuck = !m_.and_exists(g_.trans_sys, !t, g_.outputs_primed);
            return m_.and_exists(g_.trans_env & c, loser_stuck, g_.inputs_primed);
        }
        const Bdd answer = m_.and_exists(g_.trans_sys & c, t, g_.outputs_primed);
        return !m_.and_exists(g_.trans_env, !answer, g_.inputs_primed);
    }

    // Whether the winner wins from the start, given round-0 positions won.
    bool initial(const Bdd& won, const Bdd& constraint) {
        if (winner_ == Player::Environment) {
            const Bdd forced = !m_.and_exists(g_.init_sys, !won, g_.outputs);
            return !m_.and_exists(g_.init_env & constraint, forced, g_.inputs).is_false();
        }
        const Bdd answer = m_.and_exists(g_.init_sys & constraint, won, g_.outputs);
        return m_.and_exists(g_.init_env, !answer, g_.inputs).is_false();
    }

    // won[t] for t = 0..H, with won[H] empty.
    std::vector<Bdd> backward(const std::vector<Bdd>& constraints) {
        const std::size_t h = constraints.size();
        std::vector<Bdd> won(h + 1, m_.bdd_false());
        for (std::size_t t = h; t-- > 0;) {
            won[t] = step(won[t + 1], t + 1 < h ? constraints[t + 1] : m_.bdd_true());
        }
        return won;
    }

    bool wins(const std::vector<Bdd>& constraints) {
        return initial(backward(constraints)[0], constraints.empty() ? m_.bdd_true() : constraints[0]);
    }

    // Positions reachable in each round of plays where the winner keeps to
    // the constraints and the won sets.
    std::vector<Bdd> reachable(const std::vector<Bdd>& constraints, const std::vector<Bdd>& won) {
        const std::size_t h = constraints.size();
        std::vector<Bdd> r(h, m_.bdd_false());
        if (h == 0) return r;
        if (winner_ == Player::Environment) {
            const Bdd forced = !m_.and_exists(g_.init_sys, !won[0], g_.outputs);
            r[0] = g_.init_env & constraints[0] & forced & g_.init_sys;
        } else {
            r[0] = g_.init_env & g_.init_sys & constraints[0] & won[0];
        }
        for (std::size_t t = 0; t + 1 < h; ++t) {
            const Bdd next_won = m_.prime(won[t + 1]);
            Bdd move = g_.trans_env & g_.trans_sys & m_.prime(constraints[t + 1]);
            if (winner_ == Player::Environment) {
                move &= !m_.and_exists(g_.trans_sys, !next_won, g_.outputs_primed);
            } else {
                move &= next_won;
            }
            r[t + 1] = m_.unprime(m_.and_exists(r[t], move, g_.unprimed));
        }
        return r;
    }

private:
    const SymbolicGame& g_;
    bdd::Manager& m_;
    Player winner_;
};

// Smallest horizon at which the winner wins unconstrained, if any.
std::optional<std::size_t> horizon(RoundGame& game, bdd::Manager& m, std::size_t max_rounds) {
    Bdd won = m.bdd_false();
    for (std::size_t h = 0;; ++h) {
        if (game.initial(won, m.bdd_true())) return h;
        Bdd next = game.step(won, m.bdd_true());
        if (next == won) return std::nullopt;
        if (h == max_rounds) {
            throw ResourceLimit("abstract strategy needs more than " + std::to_string(max_rounds) + " rounds");
        }
        won = next;
    }
}

AbstractCell value_cell(long v) { return {AbstractCell::Kind::Value, v}; }
AbstractCell star_cell() { return {AbstractCell::Kind::Star, 0}; }

}  // namespace

std::optional<AbstractStrategy> abstract_strategy(const BooleanSpec& spec, const AbstractOptions& options) {
    const SymbolicGame g = build_game(spec, Semantics::Strict, false, nullptr, options.manager);
    bdd::Manager& m = *g.mgr;

    std::optional<std::size_t> h;
    Player winner = Player::Environment;
    for (Player p : {Player::Environment, Player::System}) {
        RoundGame probe(g, p);
        h = horizon(probe, m, options.max_rounds);
        if (h) {
            winner = p;
            break;
        }
    }
    if (!h) return std::nullopt;

    RoundGame game(g, winner);
    const VarKind own = winner == Player::Environment ? VarKind::Input : VarKind::Output;
    std::vector<Bdd> constraints(*h, m.bdd_true());
    // fixed[t][p]: value given to the winner's proposition p in round t.
    std::vector<std::vector<std::optional<bool>>> fixed(*h, std::vector<std::optional<bool>>(spec.props.size()));
    for (std::size_t t = 0; t < *h; ++t) {
        for (std::size_t p = 0; p < spec.props.size(); ++p) {
            if (spec.props[p].kind != own) continue;
            const Bdd lit = m.var(bdd::unprimed_var(static_cast<int>(p)));
            const Bdd before = constraints[t];
            for (bool value : {false, true}) {
                constraints[t] = before & (value ? lit : !lit);
                if (game.wins(constraints)) {
                    fixed[t][p] = value;
                    break;
                }
                constraints[t] = before;
            }
        }
    }

    const auto won = game.backward(constraints);
    const auto reach = game.reachable(constraints, won);

    AbstractStrategy out;
    out.winner = winner;
    out.horizon = *h;
    auto add_row = [&](const std::string& name, bool integer, const std::vector<int>& bits, long lo, long hi) {
        const VarKind kind = spec.props[static_cast<std::size_t>(bits.front())].kind;
        AbstractRow row{name, integer, kind == VarKind::Input ? Player::Environment : Player::System, {}};
        for (std::size_t t = 0; t < *h; ++t) {
            if (kind == own) {
                long enc = 0;
                bool all = true;
                for (int b : bits) {
                    const auto& f = fixed[t][static_cast<std::size_t>(b)];
                    all = all && f.has_value();
                    enc = 2 * enc + (f.value_or(false) ? 1 : 0);
                }
                row.cells.push_back(all ? value_cell(lo + enc) : star_cell());
                continue;
            }
            std::optional<long> seen;
            bool several = false;
            for (long v = lo; v <= hi && !several; ++v) {
                Bdd eq = m.bdd_true();
                for (std::size_t i = 0; i < bits.size(); ++i) {
                    const bool bit = (((v - lo) >> (bits.size() - 1 - i)) & 1) != 0;
                    const Bdd x = m.var(bdd::unprimed_var(bits[i]));
                    eq &= bit ? x : !x;
                }
                if ((reach[t] & eq).is_false()) continue;
                several = seen.has_value();
                seen = v;
            }
            row.cells.push_back(seen && !several ? value_cell(*seen) : star_cell());
        }
        row.cells.push_back({AbstractCell::Kind::Violation, 0});
        out.rows.push_back(std::move(row));
    };

    std::vector<bool> done(spec.integers.size());
    for (std::size_t p = 0; p < spec.props.size(); ++p) {
        const auto& prop = spec.props[p];
        if (prop.integer < 0) {
            add_row(prop.name, false, {static_cast<int>(p)}, 0, 1);
        } else if (!done[static_cast<std::size_t>(prop.integer)]) {
            done[static_cast<std::size_t>(prop.integer)] = true;
            const IntegerVar& v = spec.integers[static_cast<std::size_t>(prop.integer)];
            add_row(v.name, true, v.bits, v.lo, v.hi);
        }
    }
    return out;
}

}  // namespace gr1

#include <unordered_map>

#include "gr1/errors.hpp"
#include "gr1/oracle.hpp"

namespace gr1::oracle {

Bitset StepTable::at(std::size_t s, std::size_t size) const {
    switch (mode) {
        case Mode::Step: return next[s];
        case Mode::Target: return target;
        case Mode::Source: break;
    }
    Bitset b(size);
    if (now[s]) b.set();
    return b;
}

bool StepTable::holds(std::size_t s, std::size_t t) const {
    switch (mode) {
        case Mode::Step: return next[s][t];
        case Mode::Target: return target[t];
        case Mode::Source: break;
    }
    return now[s];
}

ExplicitGame::ExplicitGame(const BooleanSpec& spec, std::size_t bit_bound) : spec_(spec) {
    if (spec.props.size() > bit_bound) {
        throw PreconditionError("explicit game needs at most " + std::to_string(bit_bound) + " propositions, spec has " +
                                std::to_string(spec.props.size()));
    }
    inputs_ = spec.props_of(VarKind::Input);
    outputs_ = spec.props_of(VarKind::Output);
    const std::size_t n = size();
    patterns_.assign(spec.props.size(), Bitset(n));
    for (std::size_t pos = 0; pos < n; ++pos) {
        const auto v = valuation(pos);
        for (std::size_t p = 0; p < v.size(); ++p) patterns_[p][pos] = v[p];
    }

    auto initial = [&](const Formula& f) {
        std::vector<bool> out(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            const auto v = valuation(pos);
            out[pos] = f.eval(v, v);
        }
        return out;
    };
    init_env = initial(spec.conjunction(PartKind::EnvInit));
    init_sys = initial(spec.conjunction(PartKind::SysInit));
    trans_env = tabulate(spec.conjunction(PartKind::EnvTrans));
    trans_sys = tabulate(spec.conjunction(PartKind::SysTrans));
    for (const auto& p : spec.list(PartKind::EnvLiveness)) live_env.push_back(tabulate(p.pred, true));
    for (const auto& p : spec.list(PartKind::SysLiveness)) live_sys.push_back(tabulate(p.pred));
    if (live_env.empty()) live_env.push_back(tabulate(Formula::constant(true)));
    if (live_sys.empty()) live_sys.push_back(tabulate(Formula::constant(true)));
}

std::vector<bool> ExplicitGame::valuation(std::size_t pos) const {
    std::vector<bool> v(spec_.props.size());
    for (std::size_t k = 0; k < outputs_.size(); ++k) v[static_cast<std::size_t>(outputs_[k])] = (pos >> k) & 1;
    const std::size_t a = pos >> outputs_.size();
    for (std::size_t k = 0; k < inputs_.size(); ++k) v[static_cast<std::size_t>(inputs_[k])] = (a >> k) & 1;
    return v;
}

std::size_t ExplicitGame::index(const std::vector<bool>& v) const {
    std::size_t a = 0, o = 0;
    for (std::size_t k = 0; k < inputs_.size(); ++k) a |= std::size_t{v[static_cast<std::size_t>(inputs_[k])]} << k;
    for (std::size_t k = 0; k < outputs_.size(); ++k) o |= std::size_t{v[static_cast<std::size_t>(outputs_[k])]} << k;
    return (a << outputs_.size()) | o;
}

StepTable ExplicitGame::tabulate(const Formula& f, bool on_target) const {
    const std::size_t n = size();
    StepTable t;
    if (!f.mentions_primed()) {
        t.now.resize(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            const auto v = valuation(pos);
            t.now[pos] = f.eval(v, v);
        }
        if (on_target) {
            t.mode = StepTable::Mode::Target;
            t.target = Bitset(n);
            for (std::size_t pos = 0; pos < n; ++pos) t.target[pos] = t.now[pos];
        }
        return t;
    }
    t.mode = StepTable::Mode::Step;
    // Bit-parallel over all successors, one position at a time.
    const Bitset none(n);
    const Bitset all = ~none;
    for (std::size_t pos = 0; pos < n; ++pos) {
        std::unordered_map<const void*, Bitset> memo;
        auto eval = [&](auto&& self, const Formula& g) -> Bitset {
            if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
            Bitset r;
            switch (g.kind()) {
                case Formula::Kind::False: r = none; break;
                case Formula::Kind::True: r = all; break;
                case Formula::Kind::Var: {
                    const auto p = static_cast<std::size_t>(g.prop());
                    r = g.primed() ? patterns_[p] : (patterns_[p][pos] ? all : none);
                    break;
                }
                case Formula::Kind::Not: r = ~self(self, g.lhs()); break;
                case Formula::Kind::And: r = self(self, g.lhs()) & self(self, g.rhs()); break;
                case Formula::Kind::Or: r = self(self, g.lhs()) | self(self, g.rhs()); break;
                case Formula::Kind::Xor: r = self(self, g.lhs()) ^ self(self, g.rhs()); break;
                case Formula::Kind::Iff: r = ~(self(self, g.lhs()) ^ self(self, g.rhs())); break;
            }
            memo.emplace(g.node(), r);
            return r;
        };
        t.next.push_back(eval(eval, f));
    }
    return t;
}

namespace {

bool any_in_range(const Bitset& b, std::size_t start, std::size_t length) {
    const std::size_t hit = start == 0 ? b.find_first() : b.find_next(start - 1);
    return hit != Bitset::npos && hit < start + length;
}

// Positions from which, for every admissible input, some output reaches a
// successor in target(pos).
template <class Target>
Bitset cpre(const ExplicitGame& g, Target&& target) {
    const std::size_t n = g.size();
    const std::size_t block = std::size_t{1} << g.output_count();
    const std::size_t inputs = std::size_t{1} << g.input_count();
    Bitset out(n);
    for (std::size_t s = 0; s < n; ++s) {
        const Bitset moves = g.trans_sys.at(s, n) & target(s);
        bool ok = true;
        for (std::size_t a = 0; a < inputs && ok; ++a) {
            if (!g.trans_env.holds(s, a * block)) continue;
            ok = any_in_range(moves, a * block, block);
        }
        out[s] = ok;
    }
    return out;
}

}  // namespace

ExplicitSolution explicit_solve(const BooleanSpec& spec, bool robotics, std::size_t bit_bound) {
    return explicit_solve(ExplicitGame(spec, bit_bound), robotics);
}

ExplicitSolution explicit_solve(const ExplicitGame& g, bool robotics) {
    const std::size_t n = g.size();
    Bitset z(n);
    z.set();
    std::vector<std::vector<Bitset>> strata;
    while (true) {
        Bitset z_next(n);
        z_next.set();
        strata.assign(g.live_sys.size(), {});
        for (std::size_t j = 0; j < g.live_sys.size(); ++j) {
            Bitset y(n);
            while (true) {
                Bitset y_next(n);
                for (const StepTable& assumption : g.live_env) {
                    Bitset x(n);
                    x.set();
                    while (true) {
                        Bitset x_next = cpre(g, [&](std::size_t s) {
                            return (g.live_sys[j].at(s, n) & z) | y | (~assumption.at(s, n) & x);
                        });
                        if (x_next == x) break;
                        x = std::move(x_next);
                    }
                    y_next |= x;
                }
                if (y_next == y) break;
                y = std::move(y_next);
                strata[j].push_back(y);
            }
            z_next &= y;
        }
        if (z_next == z) break;
        z = std::move(z_next);
    }

    ExplicitSolution sol;
    sol.win = z;
    sol.distance.assign(strata.size(), std::vector<std::optional<std::size_t>>(n));
    for (std::size_t j = 0; j < strata.size(); ++j) {
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t d = 0; d < strata[j].size(); ++d) {
                if (strata[j][d][s]) {
                    sol.distance[j][s] = d;
                    break;
                }
            }
        }
    }

    const std::size_t block = std::size_t{1} << g.output_count();
    sol.realizable = true;
    for (std::size_t a = 0; a < (n / block) && sol.realizable; ++a) {
        if (!g.init_env[a * block]) continue;
        bool some = false;
        for (std::size_t o = 0; o < block; ++o) {
            const std::size_t s = a * block + o;
            if (!g.init_sys[s]) continue;
            if (robotics && !z[s]) {
                sol.realizable = false;
                break;
            }
            some = some || z[s];
        }
        if (!robotics && !some) sol.realizable = false;
    }
    return sol;
}

std::vector<std::optional<std::size_t>> safety_ranks(const ExplicitGame& g) {
    const std::size_t n = g.size();
    const std::size_t block = std::size_t{1} << g.output_count();
    const std::size_t inputs = std::size_t{1} << g.input_count();
    std::vector<std::optional<std::size_t>> rank(n);
    Bitset lose(n);
    for (std::size_t k = 0;; ++k) {
        Bitset grown = lose;
        for (std::size_t s = 0; s < n; ++s) {
            if (lose[s]) continue;
            const Bitset safe = g.trans_sys.at(s, n) & ~lose;
            for (std::size_t a = 0; a < inputs; ++a) {
                if (g.trans_env.holds(s, a * block) && !any_in_range(safe, a * block, block)) {
                    grown[s] = true;
                    rank[s] = k;
                    break;
                }
            }
        }
        if (grown == lose) break;
        lose = std::move(grown);
    }
    return rank;
}

}  // namespace gr1::oracle

#include <algorithm>

#include "gr1/analyses.hpp"
#include "gr1/errors.hpp"

namespace gr1 {

using bdd::Bdd;

SolvedGame solve_spec(const BooleanSpec& spec, const AnalysisConfig& config, std::shared_ptr<bdd::Manager> mgr) {
    SolvedGame s{build_game(spec, config.semantics, config.robotics, std::move(mgr), config.manager), {}, false};
    s.region = solve_game(s.game);
    s.realizable = check_realizability(s.game, s.region);
    return s;
}

namespace {

void require_realizable(const SolvedGame& s) {
    if (!s.realizable) throw PreconditionError("specification is unrealizable");
}

std::vector<PositionCube> largest_cubes(bdd::Manager& m, const Bdd& f, const bdd::VarSet& vars, std::size_t k) {
    std::vector<PositionCube> out;
    auto primes = m.prime_cubes(f, vars);
    while (out.size() < k) {
        auto c = primes.next();
        if (!c) break;
        out.push_back(std::move(*c));
    }
    return out;
}

// Region of the game restricted to declared values of the untransformed spec.
Bdd base_region(const SymbolicGame& g, const Bdd& region) { return g.base_positions(region) & g.base_positions(g.domain); }

}  // namespace

SemanticsResult compare_semantics(const BooleanSpec& spec, const AnalysisConfig& config) {
    AnalysisConfig c = config;
    SemanticsResult r;
    c.semantics = Semantics::Strict;
    r.strict = solve_spec(spec, c).realizable;
    c.semantics = Semantics::NonStrict;
    r.nonstrict = solve_spec(spec, c).realizable;
    r.differs = r.strict != r.nonstrict;
    return r;
}

PositionStats position_statistics(const BooleanSpec& spec, const AnalysisConfig& config) {
    SolvedGame s = solve_spec(spec, config);
    bdd::Manager& m = *s.game.mgr;
    const bdd::VarSet vars = s.game.base_unprimed();
    const Bdd domain = s.game.base_positions(s.game.domain);
    const Bdd win = base_region(s.game, s.region.win);
    const Bdd ie = to_bdd(m, spec.conjunction(PartKind::EnvInit));
    const Bdd is = to_bdd(m, spec.conjunction(PartKind::SysInit));

    auto tally = [&](const Bdd& cls) {
        return PositionClass{m.count_models(domain & cls, vars), m.count_models(win & cls, vars)};
    };
    PositionStats st;
    st.all = tally(m.bdd_true());
    st.env_init = tally(ie);
    st.sys_init = tally(is);
    st.both_init = tally(ie & is);
    st.winning_cubes = largest_cubes(m, win, vars, config.max_cubes);
    st.losing_cubes = largest_cubes(m, domain & !win, vars, config.max_cubes);
    return st;
}

RegionSummary assumption_falsification(const BooleanSpec& spec, const AnalysisConfig& config) {
    BooleanSpec forced = with_part(spec, PartKind::SysLiveness, Formula::constant(false), "FALSE");
    SolvedGame s = solve_spec(forced, config);
    bdd::Manager& m = *s.game.mgr;
    const bdd::VarSet vars = s.game.base_unprimed();
    const Bdd region = base_region(s.game, s.region.win);
    return {m.count_models(region, vars), largest_cubes(m, region, vars, config.max_cubes)};
}

bool AssumptionVerdict::any_c() const { return std::find(test_c.begin(), test_c.end(), true) != test_c.end(); }
bool AssumptionVerdict::any_d() const { return std::find(test_d.begin(), test_d.end(), true) != test_d.end(); }

std::vector<AssumptionVerdict> classify_assumptions(const BooleanSpec& spec, const AnalysisConfig& config) {
    SolvedGame full = solve_spec(spec, config);
    require_realizable(full);
    bdd::Manager& m = *full.game.mgr;
    const Strategy strategy = extract_strategy(full.game, full.region);
    const Bdd full_win = base_region(full.game, full.region.win);

    auto stratum = [](const WinningRegion& w, std::size_t j, std::size_t d, bdd::Manager& mgr) {
        const auto& levels = w.strata[j];
        if (levels.empty()) return mgr.bdd_false();
        return levels[std::min(d, levels.size() - 1)];
    };

    std::vector<AssumptionVerdict> out;
    for (PartKind kind : {PartKind::EnvInit, PartKind::EnvTrans, PartKind::EnvLiveness}) {
        const auto& parts = spec.list(kind);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].origin != PartOrigin::User) continue;
            AssumptionVerdict v{kind, i, parts[i].text, false, false, {}, {}};
            SolvedGame without = solve_spec(without_part(spec, kind, i), config, full.game.mgr);
            const Bdd without_win = base_region(without.game, without.region.win);
            v.test_a = full.realizable != without.realizable;
            v.test_b = full_win != without_win;
            const Bdd both = full.region.win & without.region.win;
            const std::size_t goals = full.region.strata.size();
            for (std::size_t j = 0; j < goals; ++j) {
                const std::size_t depth =
                    std::max(full.region.strata[j].size(), without.region.strata[j].size());
                Bdd closer = m.bdd_false();
                for (std::size_t d = 0; d < depth; ++d) {
                    closer |= stratum(full.region, j, d, m) & !stratum(without.region, j, d, m);
                }
                closer &= both;
                v.test_c.push_back(!base_region(full.game, closer).is_false());
                v.test_d.push_back(!base_region(full.game, closer & strategy.reachable[j]).is_false());
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

ResilienceResult error_resilience(const BooleanSpec& spec, const AnalysisConfig& config) {
    require_realizable(solve_spec(spec, config));
    std::size_t user = 0;
    bool breakable = false;
    for (const auto& p : spec.list(PartKind::EnvTrans)) {
        if (p.origin != PartOrigin::User) continue;
        const bool fixed =
            std::find(config.glitch_free.begin(), config.glitch_free.end(), user++) != config.glitch_free.end();
        breakable = breakable || (!fixed && !p.pred.is_true());
    }
    for (std::size_t i : config.glitch_free) {
        if (i >= user) throw std::invalid_argument("no safety assumption #" + std::to_string(i));
    }
    ResilienceResult r;
    if (!breakable) {
        r.kind = ResilienceResult::Kind::Unbounded;
        return r;
    }
    const long max_k = std::max(config.max_k, 1L);
    const GlitchOptions opts{config.glitch_free, true};
    for (long k = 0; k <= max_k; ++k) {
        const bool ok = solve_spec(make_glitch_tolerant(spec, k, max_k, opts).spec, config).realizable;
        r.realizable_at.push_back(ok);
        if (!ok) {
            r.kind = ResilienceResult::Kind::Finite;
            r.level = k - 1;
            return r;
        }
    }
    r.kind = ResilienceResult::Kind::AtLeast;
    r.level = max_k;
    return r;
}

std::vector<std::string> output_signals(const BooleanSpec& spec) {
    std::vector<std::string> out;
    for (const auto& p : spec.props) {
        if (p.kind != VarKind::Output) continue;
        if (p.integer < 0) {
            out.push_back(p.name);
        } else {
            const std::string& n = spec.integers[static_cast<std::size_t>(p.integer)].name;
            if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
        }
    }
    return out;
}

std::vector<std::string> input_signals(const BooleanSpec& spec) {
    std::vector<std::string> out;
    for (const auto& p : spec.props) {
        if (p.kind != VarKind::Input) continue;
        const std::string n = p.integer < 0 ? p.name : spec.integers[static_cast<std::size_t>(p.integer)].name;
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    return out;
}

std::vector<int> signal_props(const BooleanSpec& spec, const std::string& name) {
    if (const IntegerVar* v = spec.find_integer(name)) return v->bits;
    const int p = spec.find_prop(name);
    if (p < 0) throw std::invalid_argument("unknown signal '" + name + "'");
    return {p};
}

bool realizable_with_precommit(const BooleanSpec& spec, const AnalysisConfig& config,
                               const std::vector<std::string>& signals) {
    SymbolicGame g = build_game(spec, config.semantics, config.robotics, nullptr, config.manager);
    SolveOptions opts;
    for (const auto& s : signals) {
        for (int p : signal_props(spec, s)) opts.precommit.push_back(p);
    }
    return check_realizability(g, solve_game(g, opts));
}

PrecommitResult precommit_analysis(const BooleanSpec& spec, const AnalysisConfig& config) {
    require_realizable(solve_spec(spec, config));
    PrecommitResult r;
    for (const auto& o : output_signals(spec)) {
        const bool alone = realizable_with_precommit(spec, config, {o});
        r.per_output.emplace_back(o, alone);
        if (!alone) continue;
        std::vector<std::string> trial = r.maximal_set;
        trial.push_back(o);
        if (realizable_with_precommit(spec, config, trial)) r.maximal_set = std::move(trial);
    }
    return r;
}

BooleanSpec with_stuck_signal(const BooleanSpec& spec, int prop, bool value) {
    const bool input = spec.props[static_cast<std::size_t>(prop)].kind == VarKind::Input;
    const std::string& name = spec.props[static_cast<std::size_t>(prop)].name;
    const std::string lit = value ? name : "!" + name;
    const Formula now = value ? Formula::var(prop) : !Formula::var(prop);
    const Formula next = value ? Formula::var(prop, true) : !Formula::var(prop, true);
    BooleanSpec out = with_part(spec, input ? PartKind::EnvInit : PartKind::SysInit, now, lit);
    return with_part(out, input ? PartKind::EnvTrans : PartKind::SysTrans, next, "X(" + lit + ")");
}

StuckAtTable stuck_at_analysis(const BooleanSpec& spec, const AnalysisConfig& config) {
    StuckAtTable t;
    t.outputs = solve_spec(spec, config).realizable;
    const VarKind kind = t.outputs ? VarKind::Output : VarKind::Input;
    for (std::size_t p = 0; p < spec.props.size(); ++p) {
        if (spec.props[p].kind != kind || spec.props[p].integer >= 0) continue;
        for (bool value : {false, true}) {
            BooleanSpec stuck = with_stuck_signal(spec, static_cast<int>(p), value);
            t.entries.push_back({spec.props[p].name, value, solve_spec(stuck, config).realizable});
        }
    }
    return t;
}

}  // namespace gr1

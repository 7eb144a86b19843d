// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expected values are checked against the explicit-state oracle or
// fixed example outcomes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "gr1/analyses.hpp"
#include "gr1/oracle.hpp"
#include "gr1/report.hpp"
#include "support/game_variants.hpp"
#include "support/load.hpp"
#include "support/random_spec.hpp"
#include "support/truth_table.hpp"

using namespace gr1;
using gr1::testing::compile_text;
using gr1::testing::load_spec;

namespace {

using Clock = std::chrono::steady_clock;

// First failed expectation of a criterion.
struct Failed {
    std::string what;
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw Failed{what};
}

const std::vector<std::string> kCorpus{"counter.gr1", "delivery.gr1", "delivery_ready.gr1", "doors.gr1",
                                       "mutex.gr1",   "mutex_fixed.gr1", "patrol.gr1",     "strictness.gr1",
                                       "two_robots.gr1", "two_robots_weak.gr1"};

std::vector<std::string> random_texts(unsigned seed, std::size_t n) {
    gr1::testing::RandomSpecGenerator gen(seed);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
    return out;
}

std::vector<bool> all_vars(const std::vector<bool>& cur) {
    std::vector<bool> v(2 * cur.size());
    for (std::size_t p = 0; p < cur.size(); ++p) v[2 * p] = cur[p];
    return v;
}

std::optional<long> value_of(const IntegerVar& v, const std::vector<bool>& val) {
    long enc = 0;
    for (int b : v.bits) enc = 2 * enc + (val[static_cast<std::size_t>(b)] ? 1 : 0);
    if (enc > v.hi - v.lo) return std::nullopt;
    return v.lo + enc;
}

bool in_domain(const BooleanSpec& spec, const std::vector<bool>& val) {
    return std::all_of(spec.integers.begin(), spec.integers.end(),
                       [&](const IntegerVar& v) { return value_of(v, val).has_value(); });
}

std::size_t domain_count(const oracle::ExplicitGame& g, const oracle::Bitset& set) {
    std::size_t c = 0;
    for (std::size_t s = 0; s < g.size(); ++s) c += set[s] && in_domain(g.spec(), g.valuation(s));
    return c;
}

const AssumptionVerdict& verdict_for(const std::vector<AssumptionVerdict>& vs, const std::string& text) {
    auto it = std::find_if(vs.begin(), vs.end(), [&](const AssumptionVerdict& v) { return v.text == text; });
    if (it == vs.end()) throw Failed{"no verdict for " + text};
    return *it;
}

std::size_t position_index(const oracle::ExplicitGame& g, const BooleanSpec& spec,
                           const std::vector<std::pair<std::string, long>>& values) {
    std::vector<bool> v(spec.props.size());
    for (const auto& [name, value] : values) {
        const IntegerVar& iv = *spec.find_integer(name);
        for (std::size_t b = 0; b < iv.bits.size(); ++b) {
            v[static_cast<std::size_t>(iv.bits[b])] = ((value - iv.lo) >> (iv.bits.size() - 1 - b)) & 1;
        }
    }
    return g.index(v);
}

void mutex_positions() {
    const BooleanSpec spec = load_spec("mutex.gr1");
    expect(solve_spec(spec, {}).realizable, "mutex unrealizable");
    const auto st = position_statistics(spec, {});
    expect((st.all.total - st.all.winning) == (st.sys_init.total - st.sys_init.winning),
           "mutex loses outside the initial guarantees");

    const BooleanSpec fixed = load_spec("mutex_fixed.gr1");
    AnalysisConfig c;
    c.max_cubes = 1000;
    const SolvedGame solved = solve_spec(fixed, c);
    bdd::Manager& m = *solved.game.mgr;
    const bdd::Bdd losing = solved.game.domain & !solved.game.base_positions(solved.region.win);
    const bdd::Bdd expected = m.var(bdd::unprimed_var(fixed.find_prop("promise1"))) &
                              m.var(bdd::unprimed_var(fixed.find_prop("promise2")));
    expect(losing == expected, "corrected mutex losing set is not promise1 & promise2");
    const auto fst = position_statistics(fixed, c);
    expect(fst.losing_cubes.size() == 1 && fst.losing_cubes[0].size() == 2, "corrected mutex losing cubes");
}

void two_robots_falsification() {
    const BooleanSpec spec = load_spec("two_robots.gr1");
    expect(solve_spec(spec, {}).realizable, "two-robot spec unrealizable");
    const auto r = assumption_falsification(spec, {});
    expect(r.count > 0, "empty falsification region");
    const BooleanSpec forced = with_part(spec, PartKind::SysLiveness, Formula::constant(false), "FALSE");
    const oracle::ExplicitGame g(forced, 12);
    const auto sol = oracle::explicit_solve(g);
    expect(r.count == domain_count(g, sol.win), "falsification count differs from the oracle");
    for (long k = 0; k <= 2; ++k) {
        expect(sol.win[position_index(g, spec, {{"sx", k}, {"sy", 4}, {"px", k + 1}, {"py", 4}})],
               "adjacent top-row position missing at column " + std::to_string(k));
    }
    const BooleanSpec weak = load_spec("two_robots_weak.gr1");
    expect(solve_spec(weak, {}).realizable, "weakened spec unrealizable");
    const auto w = assumption_falsification(weak, {});
    expect(w.count == 0 && w.cubes.empty(), "weakened spec has a falsification region");
}

void doors_assumptions() {
    const auto vs = classify_assumptions(load_spec("doors.gr1"), {});
    const auto& bottom = verdict_for(vs, "bottom_open");
    const auto& top = verdict_for(vs, "top_open");
    expect(!bottom.test_a && !top.test_a, "test_a true on a door assumption");
    expect(top.any_c() && !top.any_d(), "top door: want test_c true, test_d false");
    expect(bottom.test_c == std::vector<bool>{true, true}, "bottom door: test_c not true for both goals");
}

void delivery_resilience() {
    AnalysisConfig c;
    c.glitch_free = {2, 3};
    const auto plain = error_resilience(load_spec("delivery.gr1"), c);
    expect(plain.kind == ResilienceResult::Kind::Finite && plain.level == 5,
           "delivery resilience " + std::to_string(plain.level) + ", want 5");
    const auto ready = error_resilience(load_spec("delivery_ready.gr1"), c);
    expect(ready.kind == ResilienceResult::Kind::Finite && ready.level == 1,
           "delivery with ready liveness resilience " + std::to_string(ready.level) + ", want 1");
    const BooleanSpec spec = load_spec("delivery.gr1");
    for (const char* name : {"up", "down", "left", "right", "ready"}) {
        const BooleanSpec stuck = with_stuck_signal(spec, spec.find_prop(name), false);
        expect(solve_spec(stuck, {}).realizable, std::string("stuck-at-false ") + name + " unrealizable");
    }
}

void patrol_precommit() {
    const auto r = precommit_analysis(load_spec("patrol.gr1"), {});
    std::vector<std::string> yes;
    for (const auto& [name, ok] : r.per_output) {
        if (ok) yes.push_back(name);
    }
    const std::vector<std::string> want{"r1", "r2", "r3", "r4", "r5"};
    expect(yes == want, "precommittable outputs differ");
    expect(r.maximal_set == want, "maximal precommit set differs");
}

void counter_table() {
    gr1::report::ReportConfig c;
    c.analyses = {"abstract"};
    const auto j = gr1::report::run_report(std::string(GR1_SPECS_DIR) + "/counter.gr1", c).json;
    const auto& a = j["analyses"]["abstract"]["result"];
    expect(a["winner"] == "environment" && a["horizon"] == 7, "winner or horizon");
    const std::vector<std::pair<std::string, std::string>> want{
        {"r", "T,F,T,F,T,F,T,X"}, {"counter", "0,1,1,2,2,3,3,X"}, {"x", "0,*,*,*,*,*,*,X"}, {"y", "0,*,*,*,*,*,*,X"}};
    expect(a["rows"].size() == want.size(), "row count");
    for (std::size_t i = 0; i < want.size(); ++i) {
        std::string text;
        for (const auto& cell : a["rows"][i]["cells"]) text += (text.empty() ? "" : ",") + cell.get<std::string>();
        expect(a["rows"][i]["signal"] == want[i].first && text == want[i].second,
               "row " + want[i].first + " reads " + text);
    }
}

void strictness() {
    const auto r = compare_semantics(load_spec("strictness.gr1"), {});
    expect(!r.strict && r.nonstrict && r.differs, "strict/non-strict verdicts");
}

void oracle_equivalence() {
    const auto start = Clock::now();
    int round = 0;
    for (const auto& text : random_texts(2024, 200)) {
        const BooleanSpec s = compile_text(text);
        expect(s.props.size() <= 12, "random spec too large");
        const bool robotics = round++ % 4 == 3;
        SymbolicGame g = build_game(s, Semantics::Strict, robotics);
        WinningRegion w = solve_game(g);
        oracle::ExplicitGame eg(s);
        const auto sol = oracle::explicit_solve(eg, robotics);
        for (std::size_t pos = 0; pos < eg.size(); ++pos) {
            const auto v = eg.valuation(pos);
            expect(g.mgr->eval(w.win, all_vars(v)) == sol.win[pos], "winning set differs:\n" + text);
            for (std::size_t j = 0; j < w.strata.size(); ++j) {
                expect(reactive_distance(g, w, v, j) == sol.distance[j][pos], "distance differs:\n" + text);
            }
        }
        expect(check_realizability(g, w) == sol.realizable, "realizability differs:\n" + text);
    }
    expect(Clock::now() - start < std::chrono::seconds(60), "took longer than 60 s");
}

void strategy_soundness() {
    std::vector<std::pair<BooleanSpec, std::string>> specs;
    for (const auto& name : kCorpus) specs.emplace_back(load_spec(name), name);
    for (const auto& text : random_texts(77, 200)) specs.emplace_back(compile_text(text), text);
    int checked = 0;
    for (const auto& [s, label] : specs) {
        SymbolicGame g = build_game(s);
        WinningRegion w = solve_game(g);
        if (!check_realizability(g, w)) continue;
        const auto r = oracle::model_check(build_machine(g, extract_strategy(g, w)), s);
        expect(r.pass(), r.detail + "\n" + label);
        ++checked;
    }
    expect(checked > 40, "too few realizable specs");
}

void monotonicity() {
    std::vector<BooleanSpec> corpus;
    for (const auto& text : random_texts(4242, 60)) corpus.push_back(compile_text(text));
    std::mt19937 rng(5);
    for (const auto& s : corpus) {
        // Assumptions: dropping one never grows the region.
        const SolvedGame full = solve_spec(s, {});
        for (PartKind kind : {PartKind::EnvInit, PartKind::EnvTrans, PartKind::EnvLiveness}) {
            for (std::size_t i = 0; i < s.list(kind).size(); ++i) {
                const SolvedGame w = solve_spec(without_part(s, kind, i), {}, full.game.mgr);
                expect((w.region.win & !full.region.win).is_false(), "region grew without an assumption");
            }
        }
        // Strict realizability implies non-strict.
        const auto sem = compare_semantics(s, {});
        expect(!sem.strict || sem.nonstrict, "strict realizable but non-strict not");
        if (!full.realizable) continue;

        // Glitch budgets: realizable at k implies realizable at k - 1.
        std::size_t user = 0;
        for (const auto& p : s.list(PartKind::EnvTrans)) user += p.origin == PartOrigin::User;
        std::vector<std::size_t> hard;
        for (std::size_t i = 0; i < user; ++i) {
            if (rng() % 3 == 0) hard.push_back(i);
        }
        bool previous = true;
        for (long k = 0; k <= 3; ++k) {
            const bool ok = solve_spec(make_glitch_tolerant(s, k, 3, {hard, true}).spec, {}).realizable;
            expect(previous || !ok, "realizable at a larger glitch budget only");
            previous = ok;
        }

        // Precommitment: subsets of a precommittable set are precommittable.
        const auto outs = output_signals(s);
        const std::size_t subsets = std::size_t{1} << outs.size();
        std::vector<bool> ok(subsets);
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            std::vector<std::string> names;
            for (std::size_t k = 0; k < outs.size(); ++k) {
                if ((mask >> k) & 1) names.push_back(outs[k]);
            }
            ok[mask] = realizable_with_precommit(s, {}, names);
            for (std::size_t sub = mask; sub > 0; sub = (sub - 1) & mask) {
                expect(!ok[mask] || ok[sub], "precommit sets not subset-closed");
            }
        }
    }
}

gr1::testing::TernaryCube ternary(const bdd::Cube& c) {
    gr1::testing::TernaryCube t{0, 0};
    for (auto [var, value] : c) {
        t.second |= 1u << (var / 2);
        if (value) t.first |= 1u << (var / 2);
    }
    return t;
}

void cube_correctness() {
    std::mt19937 rng(31);
    for (int round = 0; round < 40; ++round) {
        const int n = round == 39 ? 16 : 2 + round % 13;
        bdd::Manager m;
        bdd::VarSet vars;
        for (int i = 0; i < n; ++i) {
            m.new_proposition("v" + std::to_string(i));
            vars.push_back(bdd::unprimed_var(i));
        }
        bdd::Bdd f = m.bdd_false();
        const int terms = 1 + static_cast<int>(rng() % 6);
        for (int t = 0; t < terms; ++t) {
            bdd::Bdd term = m.bdd_true();
            const int lits = 1 + static_cast<int>(rng() % 5);
            for (int l = 0; l < lits; ++l) {
                const bdd::Bdd v = m.var(bdd::unprimed_var(static_cast<int>(rng() % static_cast<unsigned>(n))));
                term &= (rng() & 1u) ? v : !v;
            }
            f |= term;
        }
        gr1::testing::TruthTable table(std::size_t{1} << n);
        std::vector<bool> a(static_cast<std::size_t>(2 * n));
        for (std::uint32_t x = 0; x < table.size(); ++x) {
            for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(2 * i)] = (x >> i) & 1u;
            table[x] = m.eval(f, a);
        }
        std::set<gr1::testing::TernaryCube> emitted;
        bdd::Bdd cover = m.bdd_false();
        auto e = m.prime_cubes(f, vars);
        while (auto c = e.next()) {
            const bdd::Bdd cube = m.cube(*c);
            expect((cube & !f).is_false(), "emitted cube is not an implicant");
            cover |= cube;
            emitted.insert(ternary(*c));
        }
        expect(cover == f, "prime cubes do not cover the function");
        expect(emitted == gr1::testing::prime_implicants(table, n),
               "prime cubes differ from the truth-table oracle at n=" + std::to_string(n));
    }
    // Cubes in analysis output are implicants of the sets they describe.
    for (const auto& text : random_texts(8, 40)) {
        const BooleanSpec s = compile_text(text);
        const auto st = position_statistics(s, {});
        const SolvedGame solved = solve_spec(s, {});
        bdd::Manager& m = *solved.game.mgr;
        const bdd::Bdd win = solved.game.domain & solved.game.base_positions(solved.region.win);
        for (const auto& c : st.winning_cubes) expect((m.cube(c) & !win).is_false(), "winning cube leaves the region");
        for (const auto& c : st.losing_cubes) {
            expect((m.cube(c) & (win | !solved.game.domain)).is_false(), "losing cube leaves the losing set");
        }
    }
}

void determinism() {
    for (const auto& name : kCorpus) {
        const std::string path = std::string(GR1_SPECS_DIR) + "/" + name;
        const auto a = gr1::report::dump_json(gr1::report::run_report(path, {}).json);
        const auto b = gr1::report::dump_json(gr1::report::run_report(path, {}).json);
        expect(a == b, name + " differs between runs");
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria{
        {"mutex: realizable, corrected spec loses exactly on promise1 & promise2", mutex_positions},
        {"two robots: falsification region and weakened variant", two_robots_falsification},
        {"doors: assumption tests", doors_assumptions},
        {"delivery: resilience 5 and 1, stuck-at-false stays realizable", delivery_resilience},
        {"patrol: precommittable outputs r1..r5", patrol_precommit},
        {"counter: abstract counter-strategy table", counter_table},
        {"strict vs non-strict realizability", strictness},
        {"oracle equivalence on 200 random specs", oracle_equivalence},
        {"strategy soundness by model checking", strategy_soundness},
        {"monotonicity suites", monotonicity},
        {"cube correctness", cube_correctness},
        {"report determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = Clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            criteria[i].second();
        } catch (const Failed& f) {
            verdict = "FAIL";
            detail = f.what;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("%s %2zu  %s (%.2f s)\n", verdict.c_str(), i + 1, criteria[i].first.c_str(), secs);
        if (!detail.empty()) std::printf("        %s\n", detail.c_str());
        std::fflush(stdout);
        failures += verdict == "FAIL";
    }
    return failures == 0 ? 0 : 1;
}

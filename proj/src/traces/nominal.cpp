#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "gr1/errors.hpp"
#include "gr1/traces.hpp"

namespace gr1 {

namespace {

constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();

struct Edge {
    const std::vector<bool>* input;
    std::size_t to;
};

// Environment goal on a machine transition. A goal without primed variables
// is met by the position the environment moves to.
bool goal_holds(const Formula& goal, const std::vector<bool>& from, const std::vector<bool>& to) {
    return goal.mentions_primed() ? goal.eval(from, to) : goal.eval(to, to);
}

}  // namespace

AnnotatedTrace nominal_trace(const BooleanSpec& spec, const TraceOptions& options) {
    const SymbolicGame game = build_game(spec, options.semantics, options.robotics, nullptr, options.manager);
    const WinningRegion region = solve_game(game);
    if (!check_realizability(game, region)) throw PreconditionError("specification is unrealizable");
    const MealyMachine machine = build_machine(game, extract_strategy(game, region), options.max_states);

    AnnotatedTrace trace;
    if (machine.initial.empty()) {
        trace.status = AnnotatedTrace::Status::NoInitialPosition;
        trace.finding = "no position satisfies the initial assumptions and guarantees";
        return trace;
    }

    std::vector<Formula> goals;
    for (const auto& p : game.spec.list(PartKind::EnvLiveness)) goals.push_back(p.pred);
    if (goals.empty()) goals.push_back(Formula::constant(true));

    const std::size_t n = machine.states.size();
    std::vector<std::vector<Edge>> out(n);
    for (const auto& t : machine.transitions) out[t.from].push_back({&t.input, t.to});

    // hits[i][s]: targets of s's goal-i transitions, as edge flags.
    std::vector<std::vector<std::vector<bool>>> hits(goals.size(), std::vector<std::vector<bool>>(n));
    for (std::size_t i = 0; i < goals.size(); ++i) {
        for (std::size_t s = 0; s < n; ++s) {
            for (const Edge& e : out[s]) {
                hits[i][s].push_back(goal_holds(goals[i], machine.states[s].valuation, machine.states[e.to].valuation));
            }
        }
    }

    // Generalized Buchi region of the one-player game left once the system
    // strategy is fixed, and per-goal move counts within it.
    std::vector<bool> zone(n, true);
    std::vector<std::vector<std::size_t>> dist;
    while (true) {
        dist.assign(goals.size(), std::vector<std::size_t>(n, kFar));
        for (std::size_t i = 0; i < goals.size(); ++i) {
            auto& d = dist[i];
            for (std::size_t s = 0; s < n; ++s) {
                if (!zone[s]) continue;
                for (std::size_t k = 0; k < out[s].size(); ++k) {
                    if (hits[i][s][k] && zone[out[s][k].to]) d[s] = 1;
                }
            }
            // Relax until stable; machines are small enough for Bellman-Ford.
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t s = 0; s < n; ++s) {
                    if (!zone[s]) continue;
                    for (const Edge& e : out[s]) {
                        if (zone[e.to] && d[e.to] != kFar && d[e.to] + 1 < d[s]) {
                            d[s] = d[e.to] + 1;
                            changed = true;
                        }
                    }
                }
            }
        }
        std::vector<bool> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            next[s] = zone[s] && std::all_of(dist.begin(), dist.end(), [&](const auto& d) { return d[s] != kFar; });
        }
        if (next == zone) break;
        zone = std::move(next);
    }

    std::optional<std::size_t> start;
    for (std::size_t s : machine.initial) {
        if (zone[s] && (!start || machine.states[s].valuation < machine.states[*start].valuation)) start = s;
    }
    if (!start) {
        trace.status = AnnotatedTrace::Status::EnvironmentStuck;
        trace.finding = "the environment cannot satisfy its liveness assumptions from any initial position";
        return trace;
    }

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    std::size_t s = *start;
    std::size_t goal = 0;
    while (trace.steps.size() < options.max_steps) {
        if (auto it = seen.find({s, goal}); it != seen.end()) {
            trace.lasso_start = it->second;
            break;
        }
        seen.emplace(std::pair{s, goal}, trace.steps.size());
        const auto& v = machine.states[s].valuation;
        trace.steps.push_back({{v.begin(), v.begin() + static_cast<std::ptrdiff_t>(spec.props.size())},
                               goal,
                               machine.states[s].goal});

        const std::size_t here = dist[goal][s];
        std::optional<std::size_t> pick;
        for (std::size_t k = 0; k < out[s].size(); ++k) {
            const Edge& e = out[s][k];
            if (!zone[e.to]) continue;
            const bool good = here == 1 ? hits[goal][s][k] : dist[goal][e.to] + 1 == here;
            if (good && (!pick || *e.input < *out[s][*pick].input)) pick = k;
        }
        if (!pick) throw std::logic_error("nominal trace: no distance-decreasing move");
        if (hits[goal][s][*pick] && here == 1) goal = (goal + 1) % goals.size();
        s = out[s][*pick].to;
    }
    if (!trace.lasso_start) {
        if (auto it = seen.find({s, goal}); it != seen.end()) trace.lasso_start = it->second;
    }
    return trace;
}

}  // namespace gr1

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "gr1/oracle.hpp"

namespace gr1::oracle {

namespace {

struct Edge {
    std::size_t to;
    std::vector<bool> env_goals;
    std::vector<bool> sys_goals;
};

// Shortest path from source to a target state using edges accepted by keep;
// returns the states after the source, ending with target.
std::vector<std::size_t> shortest_path(const std::vector<std::vector<Edge>>& graph, std::size_t source,
                                       const std::function<bool(std::size_t)>& is_target,
                                       const std::function<bool(std::size_t, const Edge&)>& keep) {
    std::vector<std::optional<std::size_t>> parent(graph.size());
    std::vector<bool> seen(graph.size());
    std::deque<std::size_t> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        for (const Edge& e : graph[s]) {
            if (!keep(s, e)) continue;
            if (is_target(e.to)) {
                std::vector<std::size_t> path{e.to};
                for (std::size_t at = s; at != source; at = *parent[at]) path.push_back(at);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (!seen[e.to]) {
                seen[e.to] = true;
                parent[e.to] = s;
                queue.push_back(e.to);
            }
        }
    }
    return {};
}

}  // namespace

ModelCheckResult model_check(const MealyMachine& machine, const BooleanSpec& spec, bool robotics) {
    const std::vector<int> inputs = spec.props_of(VarKind::Input);
    const std::vector<int> outputs = spec.props_of(VarKind::Output);
    if (machine.input_props != inputs || machine.output_props != outputs) {
        throw std::invalid_argument("machine signature does not match the specification");
    }
    const std::size_t n = spec.props.size();
    for (const auto& st : machine.states) {
        if (st.valuation.size() != n) throw std::invalid_argument("machine state has the wrong width");
    }

    const Formula ie = spec.conjunction(PartKind::EnvInit);
    const Formula is = spec.conjunction(PartKind::SysInit);
    const Formula te = spec.conjunction(PartKind::EnvTrans);
    const Formula ts = spec.conjunction(PartKind::SysTrans);
    std::vector<Formula> live_env, live_sys;
    for (const auto& p : spec.list(PartKind::EnvLiveness)) live_env.push_back(p.pred);
    for (const auto& p : spec.list(PartKind::SysLiveness)) live_sys.push_back(p.pred);
    if (live_env.empty()) live_env.push_back(Formula::constant(true));
    if (live_sys.empty()) live_sys.push_back(Formula::constant(true));

    ModelCheckResult result;
    auto fail = [&](ModelCheckResult::Kind k, std::string detail) {
        result.kind = k;
        result.detail = std::move(detail);
        return result;
    };

    // Initial states.
    for (std::size_t i : machine.initial) {
        const auto& v = machine.states[i].valuation;
        if (ie.eval(v, v) && !is.eval(v, v)) {
            result.prefix = {i};
            return fail(ModelCheckResult::Kind::Initial, "initial state violates the initial guarantees");
        }
    }
    const std::size_t input_space = std::size_t{1} << inputs.size();
    const std::size_t output_space = std::size_t{1} << outputs.size();
    for (std::size_t a = 0; a < input_space; ++a) {
        std::vector<bool> v(n);
        for (std::size_t k = 0; k < inputs.size(); ++k) v[static_cast<std::size_t>(inputs[k])] = (a >> k) & 1;
        if (!ie.eval(v, v)) continue;
        auto same_inputs = [&](std::size_t i) {
            for (int p : inputs) {
                if (machine.states[i].valuation[static_cast<std::size_t>(p)] != v[static_cast<std::size_t>(p)]) return false;
            }
            return true;
        };
        if (!robotics) {
            if (std::none_of(machine.initial.begin(), machine.initial.end(), same_inputs)) {
                return fail(ModelCheckResult::Kind::Initial, "no initial state for an admissible initial input");
            }
            continue;
        }
        for (std::size_t o = 0; o < output_space; ++o) {
            for (std::size_t k = 0; k < outputs.size(); ++k) v[static_cast<std::size_t>(outputs[k])] = (o >> k) & 1;
            if (!is.eval(v, v)) continue;
            const bool present = std::any_of(machine.initial.begin(), machine.initial.end(),
                                             [&](std::size_t i) { return machine.states[i].valuation == v; });
            if (!present) return fail(ModelCheckResult::Kind::Initial, "initial guarantee valuation not covered");
        }
    }

    // Reachable product, checking safety along the way.
    std::vector<std::vector<Edge>> graph(machine.states.size());
    std::vector<std::optional<std::size_t>> parent(machine.states.size());
    std::vector<bool> reached(machine.states.size());
    std::deque<std::size_t> queue;
    for (std::size_t i : machine.initial) {
        if (!reached[i]) {
            reached[i] = true;
            queue.push_back(i);
        }
    }
    auto path_to = [&](std::size_t s) {
        std::vector<std::size_t> path{s};
        while (parent[path.back()]) path.push_back(*parent[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
    };
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        const auto& cur = machine.states[s].valuation;
        for (std::size_t a = 0; a < input_space; ++a) {
            std::vector<bool> input(inputs.size());
            std::vector<bool> probe = cur;
            for (std::size_t k = 0; k < inputs.size(); ++k) {
                input[k] = (a >> k) & 1;
                probe[static_cast<std::size_t>(inputs[k])] = input[k];
            }
            if (!te.eval(cur, probe)) continue;
            const auto to = machine.successor(s, input);
            if (!to) {
                result.prefix = path_to(s);
                return fail(ModelCheckResult::Kind::MissingMove, "no move for an admissible input");
            }
            const auto& next = machine.states[*to].valuation;
            for (std::size_t k = 0; k < inputs.size(); ++k) {
                if (next[static_cast<std::size_t>(inputs[k])] != input[k]) {
                    throw std::invalid_argument("machine transition does not carry its input");
                }
            }
            if (!ts.eval(cur, next)) {
                result.prefix = path_to(s);
                result.prefix.push_back(*to);
                return fail(ModelCheckResult::Kind::Safety, "transition violates the safety guarantees");
            }
            Edge e{*to, {}, {}};
            for (const auto& f : live_env) e.env_goals.push_back(f.mentions_primed() ? f.eval(cur, next) : f.eval(next, next));
            for (const auto& f : live_sys) e.sys_goals.push_back(f.eval(cur, next));
            graph[s].push_back(std::move(e));
            if (!reached[*to]) {
                reached[*to] = true;
                parent[*to] = s;
                queue.push_back(*to);
            }
        }
    }

    // Fair cycles avoiding one system goal: strongly connected components of
    // the graph without that goal's edges.
    const std::size_t count = machine.states.size();
    for (std::size_t j = 0; j < live_sys.size(); ++j) {
        auto keep = [&](std::size_t, const Edge& e) { return !e.sys_goals[j]; };
        std::vector<std::size_t> comp(count, SIZE_MAX), low(count), order(count, SIZE_MAX);
        std::vector<std::size_t> stack;
        std::vector<bool> on_stack(count);
        std::size_t counter = 0, components = 0;
        for (std::size_t root = 0; root < count; ++root) {
            if (!reached[root] || order[root] != SIZE_MAX) continue;
            // Iterative Tarjan.
            std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
            order[root] = low[root] = counter++;
            stack.push_back(root);
            on_stack[root] = true;
            while (!frames.empty()) {
                auto& [v, edge] = frames.back();
                if (edge < graph[v].size()) {
                    const Edge& e = graph[v][edge++];
                    if (!keep(v, e)) continue;
                    if (order[e.to] == SIZE_MAX) {
                        order[e.to] = low[e.to] = counter++;
                        stack.push_back(e.to);
                        on_stack[e.to] = true;
                        frames.emplace_back(e.to, 0);
                    } else if (on_stack[e.to]) {
                        low[v] = std::min(low[v], order[e.to]);
                    }
                    continue;
                }
                const std::size_t done = v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
                if (low[done] == order[done]) {
                    std::size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = components;
                    } while (w != done);
                    ++components;
                }
            }
        }

        std::vector<std::vector<bool>> labels(components, std::vector<bool>(live_env.size()));
        std::vector<bool> has_edge(components);
        for (std::size_t s = 0; s < count; ++s) {
            if (!reached[s]) continue;
            for (const Edge& e : graph[s]) {
                if (!keep(s, e) || comp[e.to] != comp[s]) continue;
                has_edge[comp[s]] = true;
                for (std::size_t i = 0; i < live_env.size(); ++i) {
                    if (e.env_goals[i]) labels[comp[s]][i] = true;
                }
            }
        }
        for (std::size_t c = 0; c < components; ++c) {
            if (!has_edge[c] || std::find(labels[c].begin(), labels[c].end(), false) != labels[c].end()) continue;
            std::size_t entry = 0;
            while (!reached[entry] || comp[entry] != c) ++entry;
            result.prefix = path_to(entry);
            auto inside = [&](std::size_t s, const Edge& e) { return keep(s, e) && comp[s] == c && comp[e.to] == c; };
            std::vector<std::size_t> cycle{entry};
            std::size_t at = entry;
            for (std::size_t i = 0; i < live_env.size(); ++i) {
                // Walk to a state with an internal edge satisfying goal i, then take it.
                std::size_t from = at;
                auto has_goal_edge = [&](std::size_t s) {
                    return std::any_of(graph[s].begin(), graph[s].end(),
                                       [&](const Edge& e) { return inside(s, e) && e.env_goals[i]; });
                };
                if (!has_goal_edge(at)) {
                    auto walk = shortest_path(graph, at, has_goal_edge, inside);
                    cycle.insert(cycle.end(), walk.begin(), walk.end());
                    from = walk.back();
                }
                for (const Edge& e : graph[from]) {
                    if (inside(from, e) && e.env_goals[i]) {
                        cycle.push_back(e.to);
                        at = e.to;
                        break;
                    }
                }
            }
            if (at != entry) {
                auto back = shortest_path(graph, at, [&](std::size_t s) { return s == entry; }, inside);
                cycle.insert(cycle.end(), back.begin(), back.end());
            }
            result.cycle = std::move(cycle);
            return fail(ModelCheckResult::Kind::Liveness,
                        "fair cycle never satisfies guarantee " + std::to_string(j));
        }
    }
    return result;
}

}  // namespace gr1::oracle

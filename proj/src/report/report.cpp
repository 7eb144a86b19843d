#include "gr1/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gr1/analyses.hpp"
#include "gr1/errors.hpp"
#include "gr1/spec.hpp"
#include "gr1/traces.hpp"

namespace gr1::report {

namespace {

using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

// An analysis that cannot produce a result for this spec.
struct Skip {
    std::string reason;
};

std::string big(const bdd::BigInt& n) { return n.str(); }

std::string kind_name(PartKind k) { return std::string(section_name(k)); }

// Cube over unprimed proposition variables. Integers whose bits are all fixed
// print as "x = v"; partially fixed ones fall back to bit literals.
std::string render_cube(const BooleanSpec& spec, const bdd::Cube& cube) {
    std::vector<std::optional<bool>> lit(spec.props.size());
    for (const auto& [var, value] : cube) lit[static_cast<std::size_t>(var / 2)] = value;
    std::vector<std::string> parts;
    std::vector<bool> done(spec.integers.size());
    for (std::size_t p = 0; p < spec.props.size(); ++p) {
        const BoolProp& prop = spec.props[p];
        if (prop.integer < 0) {
            if (lit[p]) parts.push_back(*lit[p] ? prop.name : "!" + prop.name);
            continue;
        }
        const auto i = static_cast<std::size_t>(prop.integer);
        if (done[i]) continue;
        done[i] = true;
        const IntegerVar& v = spec.integers[i];
        const bool all = std::all_of(v.bits.begin(), v.bits.end(),
                                     [&](int b) { return lit[static_cast<std::size_t>(b)].has_value(); });
        if (all) {
            long enc = 0;
            for (int b : v.bits) enc = 2 * enc + (*lit[static_cast<std::size_t>(b)] ? 1 : 0);
            parts.push_back(v.name + " = " + std::to_string(v.lo + enc));
            continue;
        }
        for (int b : v.bits) {
            const auto& l = lit[static_cast<std::size_t>(b)];
            if (l) parts.push_back((*l ? "" : "!") + spec.props[static_cast<std::size_t>(b)].name);
        }
    }
    if (parts.empty()) return "TRUE";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " & " : "") + parts[i];
    return out;
}

Json cubes_json(const BooleanSpec& spec, const std::vector<bdd::Cube>& cubes) {
    Json a = Json::array();
    for (const auto& c : cubes) a.push_back(render_cube(spec, c));
    return a;
}

Json signals_json(const BooleanSpec& spec, VarKind kind) {
    Json a = Json::array();
    std::vector<bool> done(spec.integers.size());
    for (const auto& p : spec.props) {
        if (p.kind != kind) continue;
        if (p.integer < 0) {
            a.push_back({{"name", p.name}, {"type", "boolean"}});
            continue;
        }
        const auto i = static_cast<std::size_t>(p.integer);
        if (done[i]) continue;
        done[i] = true;
        const IntegerVar& v = spec.integers[i];
        a.push_back({{"name", v.name}, {"type", "integer"}, {"min", v.lo}, {"max", v.hi}});
    }
    return a;
}

// Signal values of a valuation, declaration order.
Json valuation_json(const BooleanSpec& spec, const std::vector<bool>& val) {
    Json o = Json::object();
    std::vector<bool> done(spec.integers.size());
    for (std::size_t p = 0; p < spec.props.size(); ++p) {
        const BoolProp& prop = spec.props[p];
        if (prop.integer < 0) {
            o[prop.name] = static_cast<bool>(val[p]);
            continue;
        }
        const auto i = static_cast<std::size_t>(prop.integer);
        if (done[i]) continue;
        done[i] = true;
        o[spec.integers[i].name] = decode_integer(spec.integers[i], val);
    }
    return o;
}

std::string semantics_name(Semantics s) { return s == Semantics::Strict ? "strict" : "nonstrict"; }

std::string mode_name(SemanticsMode m) {
    switch (m) {
        case SemanticsMode::Strict: return "strict";
        case SemanticsMode::NonStrict: return "nonstrict";
        default: return "both";
    }
}

std::string player_name(Player p) { return p == Player::Environment ? "environment" : "system"; }

std::string cell_text(const AbstractRow& row, const AbstractCell& c) {
    switch (c.kind) {
        case AbstractCell::Kind::Star: return "*";
        case AbstractCell::Kind::Violation: return "X";
        default: break;
    }
    if (row.integer) return std::to_string(c.value);
    return c.value ? "T" : "F";
}

class Runner {
public:
    Runner(const BooleanSpec& spec, const ReportConfig& config) : spec_(spec), config_(config) {
        primary_ = config.semantics == SemanticsMode::NonStrict ? Semantics::NonStrict : Semantics::Strict;
    }

    AnalysisConfig analysis_config() const {
        AnalysisConfig c;
        c.semantics = primary_;
        c.robotics = config_.robotics;
        c.max_cubes = config_.max_cubes;
        c.max_k = config_.max_k;
        c.glitch_free = config_.glitch_free;
        c.manager = manager_options();
        return c;
    }

    bdd::ManagerOptions manager_options() const {
        bdd::ManagerOptions o;
        o.node_budget = config_.node_budget;
        if (config_.timeout_seconds > 0) {
            o.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                            std::chrono::duration<double>(config_.timeout_seconds));
        }
        return o;
    }

    Semantics primary() const { return primary_; }

    Json run(const std::string& id, bool realizable) {
        if (id == "semantics") return semantics();
        if (id == "positions") return positions();
        if (id == "falsify") return falsify();
        if (id == "assumptions") return need(realizable), assumptions();
        if (id == "resilience") return need(realizable), resilience();
        if (id == "precommit") return need(realizable), precommit();
        if (id == "stuckat") return stuckat();
        if (id == "trace") return need(realizable), trace();
        if (id == "abstract") return abstract();
        throw std::invalid_argument("unknown analysis " + id);
    }

private:
    static void need(bool realizable) {
        if (!realizable) throw Skip{"unrealizable"};
    }

    Json semantics() {
        const auto r = compare_semantics(spec_, analysis_config());
        return {{"strict", r.strict}, {"nonstrict", r.nonstrict}, {"differs", r.differs}};
    }

    Json positions() {
        const auto s = position_statistics(spec_, analysis_config());
        auto cls = [](const PositionClass& c) { return Json{{"total", big(c.total)}, {"winning", big(c.winning)}}; };
        return {{"all", cls(s.all)},
                {"env_init", cls(s.env_init)},
                {"sys_init", cls(s.sys_init)},
                {"both_init", cls(s.both_init)},
                {"winning_cubes", cubes_json(spec_, s.winning_cubes)},
                {"losing_cubes", cubes_json(spec_, s.losing_cubes)}};
    }

    Json falsify() {
        const auto r = assumption_falsification(spec_, analysis_config());
        return {{"count", big(r.count)}, {"cubes", cubes_json(spec_, r.cubes)}};
    }

    Json assumptions() {
        Json a = Json::array();
        for (const auto& v : classify_assumptions(spec_, analysis_config())) {
            a.push_back({{"section", kind_name(v.kind)},
                         {"index", v.index},
                         {"text", v.text},
                         {"test_a", v.test_a},
                         {"test_b", v.test_b},
                         {"test_c", v.test_c},
                         {"test_d", v.test_d},
                         {"useful", v.useful()}});
        }
        return {{"verdicts", a}};
    }

    Json resilience() {
        const auto r = error_resilience(spec_, analysis_config());
        Json o;
        switch (r.kind) {
            case ResilienceResult::Kind::Finite: o["kind"] = "finite"; break;
            case ResilienceResult::Kind::Unbounded: o["kind"] = "unbounded"; break;
            case ResilienceResult::Kind::AtLeast: o["kind"] = "at_least"; break;
        }
        o["level"] = r.kind == ResilienceResult::Kind::Unbounded ? Json(nullptr) : Json(r.level);
        o["realizable_at"] = r.realizable_at;
        o["glitch_free"] = config_.glitch_free;
        return o;
    }

    Json precommit() {
        const auto r = precommit_analysis(spec_, analysis_config());
        Json per = Json::array();
        for (const auto& [sig, ok] : r.per_output) per.push_back({{"signal", sig}, {"precommittable", ok}});
        return {{"per_output", per}, {"maximal_set", r.maximal_set}};
    }

    Json stuckat() {
        const auto t = stuck_at_analysis(spec_, analysis_config());
        Json e = Json::array();
        for (const auto& x : t.entries) e.push_back({{"signal", x.signal}, {"value", x.value}, {"realizable", x.realizable}});
        return {{"direction", t.outputs ? "outputs" : "inputs"}, {"entries", e}};
    }

    Json trace() {
        TraceOptions o;
        o.semantics = primary_;
        o.robotics = config_.robotics;
        o.max_steps = config_.max_trace_steps;
        o.manager = manager_options();
        const AnnotatedTrace t = nominal_trace(spec_, o);
        Json out;
        switch (t.status) {
            case AnnotatedTrace::Status::Ok: out["status"] = "ok"; break;
            case AnnotatedTrace::Status::NoInitialPosition: out["status"] = "no_initial_position"; break;
            case AnnotatedTrace::Status::EnvironmentStuck: out["status"] = "environment_stuck"; break;
        }
        out["finding"] = t.finding.empty() ? Json(nullptr) : Json(t.finding);
        Json steps = Json::array();
        for (const auto& s : t.steps) {
            steps.push_back({{"values", valuation_json(spec_, s.valuation)},
                             {"env_goal", s.env_goal},
                             {"sys_goal", s.sys_goal}});
        }
        out["steps"] = steps;
        out["lasso_start"] = t.lasso_start ? Json(*t.lasso_start) : Json(nullptr);
        return out;
    }

    Json abstract() {
        AbstractOptions o;
        o.max_rounds = config_.abstract_horizon;
        o.manager = manager_options();
        const auto s = abstract_strategy(spec_, o);
        if (!s) return {{"winner", nullptr}, {"horizon", nullptr}, {"rows", Json::array()}};
        Json rows = Json::array();
        for (const auto& r : s->rows) {
            Json cells = Json::array();
            for (const auto& c : r.cells) cells.push_back(cell_text(r, c));
            rows.push_back({{"signal", r.signal}, {"owner", player_name(r.owner)}, {"cells", cells}});
        }
        return {{"winner", player_name(s->winner)}, {"horizon", s->horizon}, {"rows", rows}};
    }

    const BooleanSpec& spec_;
    const ReportConfig& config_;
    Semantics primary_;
};

std::string shape_message(const std::vector<ShapeViolation>& v, const SpecDocument& doc) {
    std::string msg = "not a GR(1) specification:";
    for (const auto& s : v) {
        const auto& part = doc.list(s.kind)[static_cast<std::size_t>(s.index)];
        msg += "\n  " + std::to_string(part.line) + ": " + kind_name(s.kind) + " " + s.rule;
    }
    return msg;
}

std::string base_name(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

const std::vector<std::string>& known_analyses() {
    static const std::vector<std::string> ids{"semantics", "positions",  "falsify", "assumptions", "resilience",
                                              "precommit", "stuckat",    "trace",   "abstract"};
    return ids;
}

void ReportConfig::validate() const {
    for (const auto& a : analyses) {
        if (std::find(known_analyses().begin(), known_analyses().end(), a) == known_analyses().end()) {
            throw std::invalid_argument("unknown analysis: " + a);
        }
    }
    if (max_k <= 0 || max_cubes == 0 || max_trace_steps == 0 || abstract_horizon == 0) {
        throw std::invalid_argument("bounds must be positive");
    }
    if (timeout_seconds < 0) throw std::invalid_argument("timeout must not be negative");
}

Report run_report_text(const std::string& text, const std::string& spec_name, const ReportConfig& config) {
    config.validate();
    const SpecDocument doc = parse_spec(text);
    if (auto v = validate_gr1_shape(doc); !v.empty()) throw SpecError(shape_message(v, doc));
    const BooleanSpec spec = compile_to_boolean(doc);

    Runner runner(spec, config);
    Report report;
    Json& j = report.json;
    j["tool"] = "gr1report";
    j["version"] = kVersion;
    j["spec"] = {{"name", spec_name}, {"digest", "sha256:" + sha256_hex(text)}};

    Json cfg;
    cfg["analyses"] = config.analyses;
    cfg["semantics"] = mode_name(config.semantics);
    cfg["robotics"] = config.robotics;
    cfg["max_k"] = config.max_k;
    cfg["max_cubes"] = config.max_cubes;
    cfg["max_trace_steps"] = config.max_trace_steps;
    cfg["abstract_horizon"] = config.abstract_horizon;
    cfg["node_budget"] = config.node_budget;
    cfg["timeout_seconds"] = config.timeout_seconds;
    cfg["glitch_free"] = config.glitch_free;
    j["config"] = cfg;
    j["signals"] = {{"inputs", signals_json(spec, VarKind::Input)}, {"outputs", signals_json(spec, VarKind::Output)}};

    // Baseline verdicts. Resource exhaustion here ends the run.
    Json real = Json::object();
    bool realizable = false;
    bool exhausted = false;
    std::vector<Semantics> checked;
    if (config.semantics != SemanticsMode::NonStrict) checked.push_back(Semantics::Strict);
    if (config.semantics != SemanticsMode::Strict) checked.push_back(Semantics::NonStrict);
    for (Semantics s : checked) {
        AnalysisConfig ac = runner.analysis_config();
        ac.semantics = s;
        try {
            SolvedGame solved = solve_spec(spec, ac);
            real[semantics_name(s)] = solved.realizable;
            if (s == runner.primary()) {
                realizable = solved.realizable;
                if (config.dump_bdd) {
                    std::ofstream dot(*config.dump_bdd);
                    if (!dot) throw std::runtime_error("cannot write " + *config.dump_bdd);
                    solved.game.mgr->write_dot(dot, solved.region.win);
                }
            }
        } catch (const ResourceLimit& e) {
            real[semantics_name(s)] = nullptr;
            exhausted = true;
        }
    }
    j["realizability"] = {{"semantics", semantics_name(runner.primary())},
                          {"verdicts", real},
                          {"realizable", exhausted ? Json(nullptr) : Json(realizable)}};

    Json analyses = Json::object();
    Json timings = Json::object();
    for (const auto& id : known_analyses()) {
        if (std::find(config.analyses.begin(), config.analyses.end(), id) == config.analyses.end()) continue;
        if (exhausted) {
            analyses[id] = {{"status", "skipped"}, {"reason", "baseline check out of resources"}};
            continue;
        }
        const auto start = Clock::now();
        try {
            analyses[id] = {{"status", "ok"}, {"result", runner.run(id, realizable)}};
        } catch (const Skip& s) {
            analyses[id] = {{"status", "skipped"}, {"reason", s.reason}};
        } catch (const ResourceLimit& e) {
            const bool late = config.timeout_seconds > 0 &&
                              std::chrono::duration<double>(Clock::now() - start).count() >= config.timeout_seconds;
            analyses[id] = {{"status", "skipped"}, {"reason", late ? "timeout" : std::string("resource limit: ") + e.what()}};
        } catch (const PreconditionError& e) {
            analyses[id] = {{"status", "skipped"}, {"reason", std::string("precondition: ") + e.what()}};
        }
        timings[id] = std::chrono::duration<double>(Clock::now() - start).count();
    }
    j["analyses"] = analyses;

    Json notes = Json::array();
    if (config.semantics == SemanticsMode::Both) {
        notes.push_back("per-position analyses, traces and stuck-at use strict semantics");
    }
    if (!realizable && !exhausted) {
        notes.push_back("unrealizable: stuck-at probes inputs and the abstract strategy looks for a counter-strategy");
    }
    notes.push_back("abstract strategy fixes, round by round, the first constant (false before true) that keeps the win");
    j["notes"] = notes;
    if (config.timings) j["timings"] = timings;

    report.exit_code = exhausted ? 2 : 0;
    return report;
}

Report run_report(const std::string& spec_path, const ReportConfig& config) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + spec_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_report_text(ss.str(), base_name(spec_path), config);
}

std::string dump_json(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace gr1::report

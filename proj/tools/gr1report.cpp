// gr1report: analyze a GR(1) specification file and write JSON and HTML reports.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gr1/errors.hpp"
#include "gr1/report.hpp"

namespace {

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
    using gr1::report::SemanticsMode;
    CLI::App app{"Debugging report for a GR(1) specification"};
    std::string spec_path, html_path, json_path, analyses, glitch_free;
    SemanticsMode semantics = SemanticsMode::Both;
    gr1::report::ReportConfig config;
    std::string dump;

    app.add_option("SPEC", spec_path, "Specification file")->required();
    app.add_option("--html", html_path, "HTML output (default SPEC.report.html)");
    app.add_option("--json", json_path, "JSON output (default SPEC.report.json)");
    app.add_option("--analyses", analyses, "Comma-separated subset of analyses");
    app.add_option("--semantics", semantics, "strict, nonstrict or both")
        ->transform(CLI::CheckedTransformer(std::map<std::string, SemanticsMode>{
            {"strict", SemanticsMode::Strict}, {"nonstrict", SemanticsMode::NonStrict}, {"both", SemanticsMode::Both}}));
    app.add_flag("--robotics", config.robotics, "System must win from every initial output choice");
    app.add_option("--max-k", config.max_k, "Largest glitch budget tried")->check(CLI::PositiveNumber);
    app.add_option("--max-cubes", config.max_cubes, "Cubes listed per region")->check(CLI::PositiveNumber);
    app.add_option("--max-trace-steps", config.max_trace_steps, "Nominal trace length bound")->check(CLI::PositiveNumber);
    app.add_option("--abstract-horizon", config.abstract_horizon, "Round bound for abstract strategies")
        ->check(CLI::PositiveNumber);
    app.add_option("--timeout", config.timeout_seconds, "Seconds per analysis (0: none)")->check(CLI::NonNegativeNumber);
    app.add_option("--node-budget", config.node_budget, "Live BDD node limit per manager (0: none)");
    app.add_option("--dump-bdd", dump, "Write the baseline winning region as DOT");
    app.add_option("--glitch-free", glitch_free, "Safety assumptions (0-based) that never glitch, comma-separated");
    app.add_flag("--timings", config.timings, "Record wall-clock time per analysis");
    CLI11_PARSE(app, argc, argv);

    try {
        config.semantics = semantics;
        if (!analyses.empty()) config.analyses = split(analyses);
        for (const auto& g : split(glitch_free)) config.glitch_free.push_back(std::stoul(g));
        if (!dump.empty()) config.dump_bdd = dump;
        if (json_path.empty()) json_path = spec_path + ".report.json";
        if (html_path.empty()) html_path = spec_path + ".report.html";

        const auto report = gr1::report::run_report(spec_path, config);
        write_file(json_path, gr1::report::dump_json(report.json));
        write_file(html_path, gr1::report::render_html(report.json));
        if (report.exit_code == 2) std::cerr << spec_path << ": baseline realizability check ran out of resources\n";
        return report.exit_code;
    } catch (const gr1::SpecError& e) {
        std::cerr << spec_path << (e.line() > 0 ? ":" : ": ") << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "gr1report: " << e.what() << "\n";
    }
    return 1;
}

// HTML view of a report. Everything shown comes from the JSON document.

#include <set>
#include <sstream>

#include "gr1/report.hpp"

namespace gr1::report {

namespace {

constexpr const char* kStyle = R"(
body{font-family:system-ui,sans-serif;margin:2em auto;max-width:70em;color:#222}
h1{font-size:1.5em}h2{font-size:1.15em;border-bottom:1px solid #ccc;padding-bottom:.2em;margin-top:1.6em}
table{border-collapse:collapse;margin:.4em 0}
td,th{border:1px solid #ccc;padding:.15em .5em;text-align:left;vertical-align:top;font-size:.92em}
th{background:#f3f3f3}
code,.mono{font-family:ui-monospace,monospace}
.ok{color:#176117;font-weight:bold}.bad{color:#a11;font-weight:bold}.skip{color:#8a5a00}
.abs td{text-align:center;font-family:ui-monospace,monospace;min-width:1.8em}
.abs td.sig{text-align:left}
.abs td.X{background:#f6d5d5}.abs td.star{color:#888}
tr.lasso td{border-top:2px solid #36c}
)";

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string scalar(const Json& v) {
    if (v.is_string()) return esc(v.get<std::string>());
    if (v.is_null()) return "<em>none</em>";
    return esc(v.dump());
}

void render(std::ostream& out, const Json& v);

void render_array(std::ostream& out, const Json& a) {
    if (a.empty()) {
        out << "<em>empty</em>";
        return;
    }
    bool objects = true;
    bool scalars = true;
    for (const auto& e : a) {
        objects = objects && e.is_object();
        scalars = scalars && !e.is_structured();
    }
    if (scalars) {
        for (std::size_t i = 0; i < a.size(); ++i) out << (i ? ", " : "") << "<span class=mono>" << scalar(a[i]) << "</span>";
        return;
    }
    if (!objects) {
        out << "<ol>";
        for (const auto& e : a) {
            out << "<li>";
            render(out, e);
            out << "</li>";
        }
        out << "</ol>";
        return;
    }
    std::vector<std::string> keys;
    std::set<std::string> seen;
    for (const auto& e : a) {
        for (const auto& [k, _] : e.items()) {
            if (seen.insert(k).second) keys.push_back(k);
        }
    }
    out << "<table><tr>";
    for (const auto& k : keys) out << "<th>" << esc(k) << "</th>";
    out << "</tr>";
    for (const auto& e : a) {
        out << "<tr>";
        for (const auto& k : keys) {
            out << "<td>";
            if (e.contains(k)) render(out, e[k]);
            out << "</td>";
        }
        out << "</tr>";
    }
    out << "</table>";
}

void render(std::ostream& out, const Json& v) {
    if (v.is_object()) {
        out << "<table>";
        for (const auto& [k, x] : v.items()) {
            out << "<tr><th>" << esc(k) << "</th><td>";
            render(out, x);
            out << "</td></tr>";
        }
        out << "</table>";
    } else if (v.is_array()) {
        render_array(out, v);
    } else {
        out << scalar(v);
    }
}

// Rounds as columns, one row per signal.
void render_abstract(std::ostream& out, const Json& r) {
    if (r["winner"].is_null()) {
        out << "<p>Neither player wins on the safety parts alone.</p>";
        return;
    }
    out << "<p>Winner: <b>" << scalar(r["winner"]) << "</b>, violation in round " << scalar(r["horizon"]) << ".</p>";
    const std::size_t rounds = r["rows"].empty() ? 0 : r["rows"][0]["cells"].size();
    out << "<table class=abs><tr><th>signal</th><th>owner</th>";
    for (std::size_t t = 0; t < rounds; ++t) out << "<th>" << t << "</th>";
    out << "</tr>";
    for (const auto& row : r["rows"]) {
        out << "<tr><td class=sig>" << scalar(row["signal"]) << "</td><td>" << scalar(row["owner"]) << "</td>";
        for (const auto& c : row["cells"]) {
            const std::string s = c.get<std::string>();
            const char* cls = s == "X" ? " class=X" : s == "*" ? " class=star" : "";
            out << "<td" << cls << ">" << esc(s) << "</td>";
        }
        out << "</tr>";
    }
    out << "</table>";
}

void render_trace(std::ostream& out, const Json& r) {
    out << "<p>Status: " << scalar(r["status"]);
    if (!r["finding"].is_null()) out << ". " << scalar(r["finding"]);
    out << "</p>";
    const Json& steps = r["steps"];
    if (steps.empty()) return;
    out << "<p>lasso_start: " << scalar(r["lasso_start"]) << "</p>";
    out << "<table><tr><th>step</th>";
    for (const auto& [k, _] : steps[0]["values"].items()) out << "<th>" << esc(k) << "</th>";
    out << "<th>env_goal</th><th>sys_goal</th></tr>";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const bool loop = !r["lasso_start"].is_null() && r["lasso_start"].get<std::size_t>() == i;
        out << "<tr" << (loop ? " class=lasso" : "") << "><td>" << i << "</td>";
        for (const auto& [_, v] : steps[i]["values"].items()) out << "<td class=mono>" << scalar(v) << "</td>";
        out << "<td>" << scalar(steps[i]["env_goal"]) << "</td><td>" << scalar(steps[i]["sys_goal"]) << "</td></tr>";
    }
    out << "</table>";
}

}  // namespace

std::string render_html(const Json& report) {
    std::ostringstream out;
    const Json& spec = report["spec"];
    out << "<!DOCTYPE html>\n<html lang=en><head><meta charset=utf-8><title>" << scalar(spec["name"])
        << " report</title><style>" << kStyle << "</style></head><body>\n";
    out << "<h1>" << scalar(spec["name"]) << "</h1>\n";
    out << "<p class=mono>" << scalar(report["tool"]) << " " << scalar(report["version"]) << "<br>"
        << scalar(spec["digest"]) << "</p>\n";

    const Json& real = report["realizability"];
    out << "<h2>realizability</h2>\n<p>";
    if (real["realizable"].is_null()) {
        out << "<span class=skip>undetermined</span>";
    } else if (real["realizable"].get<bool>()) {
        out << "<span class=ok>realizable</span>";
    } else {
        out << "<span class=bad>unrealizable</span>";
    }
    out << " (" << scalar(real["semantics"]) << ")</p>\n";
    render(out, real["verdicts"]);

    out << "\n<h2>signals</h2>\n";
    render(out, report["signals"]);
    out << "\n<h2>config</h2>\n";
    render(out, report["config"]);

    for (const auto& [id, a] : report["analyses"].items()) {
        out << "\n<h2>" << esc(id) << "</h2>\n";
        if (a["status"] == "skipped") {
            out << "<p class=skip>skipped: " << scalar(a["reason"]) << "</p>";
            continue;
        }
        if (id == "abstract") {
            render_abstract(out, a["result"]);
        } else if (id == "trace") {
            render_trace(out, a["result"]);
        } else {
            render(out, a["result"]);
        }
    }

    out << "\n<h2>notes</h2>\n<ul>";
    for (const auto& n : report["notes"]) out << "<li>" << scalar(n) << "</li>";
    out << "</ul>\n";
    if (report.contains("timings")) {
        out << "<h2>timings (s)</h2>\n";
        render(out, report["timings"]);
    }
    out << "\n</body></html>\n";
    return out.str();
}

}  // namespace gr1::report

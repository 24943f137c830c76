#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pyfluency/report.hpp"

namespace pyfluency {

class OutputError : public std::runtime_error {
public:
    explicit OutputError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Bar width in percent, rounded to the nearest integer.
inline int bar_percent(std::int64_t count, std::int64_t max_count) {
    if (max_count <= 0) return 0;
    return static_cast<int>((100 * count + max_count / 2) / max_count);
}

namespace html_detail {

inline constexpr std::string_view kStyle = R"(
body { font-family: -apple-system, "Segoe UI", Roboto, sans-serif; margin: 2rem auto; max-width: 60rem; color: #222; }
h1 { border-bottom: 2px solid #ddd; padding-bottom: .4rem; }
section.unit { margin: 1.5rem 0; }
.chart { max-width: 28rem; }
.chart .row { display: flex; align-items: center; margin: 2px 0; }
.chart .lvl { width: 2.2rem; font-weight: 600; }
.chart .track { flex: 1; background: #f0f0f0; border-radius: 3px; }
.chart .bar { height: 0.9rem; border-radius: 3px; }
.chart .n { width: 3.5rem; text-align: right; font-variant-numeric: tabular-nums; }
.bar.grp-A { background: #4caf7d; }
.bar.grp-B { background: #e0a53c; }
.bar.grp-C { background: #d9604f; }
.level { font-weight: 700; }
table { border-collapse: collapse; margin: .5rem 0 1rem; }
th, td { border: 1px solid #ddd; padding: .25rem .6rem; text-align: left; }
th { background: #f6f6f6; }
p.failure { color: #b3261e; font-weight: 600; }
p.empty { color: #666; }
)";

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot write " + path.string());
    out << content;
    if (!out) throw OutputError("failed while writing " + path.string());
}

inline std::string page_header(std::string_view title) {
    std::string out = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    out += "<title>" + html_escape(title) + "</title>\n<style>";
    out += kStyle;
    out += "</style>\n</head>\n<body>\n";
    return out;
}

inline std::string chart_markup(const LevelHistogram& histogram) {
    std::int64_t max_count = 0;
    for (Level level : all_levels()) max_count = std::max(max_count, histogram.count(level));
    std::string out = "<div class=\"chart\" data-max=\"" + std::to_string(max_count) + "\">\n";
    for (Level level : all_levels()) {
        std::int64_t n = histogram.count(level);
        out += "<div class=\"row\"><span class=\"lvl\">" + std::string(level.label()) +
               "</span><div class=\"track\"><div class=\"bar grp-" + level.group() +
               "\" style=\"width:" + std::to_string(bar_percent(n, max_count)) +
               "%\" data-count=\"" + std::to_string(n) + "\"></div></div><span class=\"n\">" +
               std::to_string(n) + "</span></div>\n";
    }
    out += "</div>\n";
    return out;
}

inline std::string required_text(const std::optional<Level>& level) {
    return level ? std::string(level->label()) : std::string("unrated");
}

}  // namespace html_detail

/// Writes the static report pages: an index with per-unit charts (the report
/// JSON is embedded as a data block) and one drill-down page per unit. No
/// network assets. Returns the paths written.
inline std::vector<std::filesystem::path> write_html_report(std::span<const UnitReport> run,
                                                            const std::filesystem::path& out_dir,
                                                            const std::string& json_text) {
    namespace fs = std::filesystem;
    using namespace html_detail;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw OutputError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<fs::path> written;

    std::string index = page_header("Python Proficiency Report");
    index += "<h1>Python Proficiency Report</h1>\n";
    if (run.empty()) {
        index += "<p class=\"empty\">No data.</p>\n";
    }
    for (size_t i = 0; i < run.size(); ++i) {
        const UnitReport& unit = run[i];
        std::string page = "unit-" + std::to_string(i) + ".html";
        index += "<section class=\"unit\">\n<h2><a href=\"" + page + "\">" +
                 html_escape(unit.name) + "</a></h2>\n";
        index += "<p>Required level: <span class=\"level\">" +
                 required_text(unit.required_level) + "</span> &middot; " +
                 std::to_string(unit.files.size()) + " files &middot; " +
                 std::to_string(unit.files_failed) + " parse failures</p>\n";
        index += chart_markup(unit.histogram);
        index += "</section>\n";
    }
    index += "<script type=\"application/json\" id=\"report-data\">\n";
    index += json_text;
    index += "</script>\n</body>\n</html>\n";
    write_file(out_dir / "index.html", index);
    written.push_back(out_dir / "index.html");

    for (size_t i = 0; i < run.size(); ++i) {
        const UnitReport& unit = run[i];
        std::string page = page_header(unit.name);
        page += "<h1>" + html_escape(unit.name) + "</h1>\n";
        page += "<p><a href=\"index.html\">&larr; All units</a></p>\n";
        page += "<p>Required level: <span class=\"level\">" +
                required_text(unit.required_level) + "</span></p>\n";
        page += chart_markup(unit.histogram);
        for (const FileReport& file : unit.files) {
            page += "<h2>" + html_escape(file.path) + "</h2>\n";
            if (file.failure) {
                page += "<p class=\"failure\">Parse failure at line " +
                        std::to_string(file.failure->line) + ": " +
                        html_escape(file.failure->message) + "</p>\n";
                continue;
            }
            if (file.occurrences.empty()) {
                page += "<p class=\"empty\">No constructs detected.</p>\n";
                continue;
            }
            page += "<p>Required level: <span class=\"level\">" +
                    required_text(file.required_level) + "</span></p>\n";
            page += "<table>\n<thead><tr><th>Class</th><th>Start Line</th><th>End Line</th>"
                    "<th>Displacement</th><th>Level</th></tr></thead>\n<tbody>\n";
            for (const Occurrence& occ : file.occurrences) {
                page += "<tr><td>" + html_escape(occ.display_name) + "</td><td>" +
                        std::to_string(occ.start_line) + "</td><td>" +
                        std::to_string(occ.end_line) + "</td><td>" +
                        std::to_string(occ.displacement) + "</td><td>" +
                        std::string(occ.level.label()) + "</td></tr>\n";
            }
            page += "</tbody>\n</table>\n";
        }
        page += "</body>\n</html>\n";
        fs::path path = out_dir / ("unit-" + std::to_string(i) + ".html");
        write_file(path, page);
        written.push_back(path);
    }
    return written;
}

}  // namespace pyfluency

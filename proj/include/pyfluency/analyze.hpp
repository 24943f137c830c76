#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pyfluency/catalog.hpp"
#include "pyfluency/detector.hpp"
#include "pyfluency/github_http.hpp"
#include "pyfluency/html.hpp"
#include "pyfluency/ingest.hpp"
#include "pyfluency/parser.hpp"
#include "pyfluency/report.hpp"
#include "pyfluency/serialize.hpp"

namespace pyfluency {

struct RunConfig {
    SourceSpec source;
    std::string levels_config_path;  // empty: built-in defaults
    std::filesystem::path output_dir = "cefr-out";
    bool write_json = false;
    bool write_csv = false;
    bool write_html = false;
    bool print_terminal = true;
    int workers = 0;  // 0: one per logical CPU
    bool keep_clones = false;
    bool exclude_forks = false;
    HostingApi* api = nullptr;  // injected in tests; live client otherwise
    std::filesystem::path workdir;
};

/// parse + detect + fold for one file.
inline FileReport analyze_file(const SourceFile& file, const LevelMapping& mapping) {
    ParseOutcome outcome = parse_source(file);
    if (auto* failure = std::get_if<ParseFailure>(&outcome))
        return summarize_file(file.rel_path, {}, *failure);
    return summarize_file(file.rel_path, detect(std::get<SyntaxTree>(outcome), mapping));
}

/// Analyzes all files with a bounded worker pool and folds them into unit
/// reports. Units appear in first-seen input order; files inside a unit are
/// sorted by path, so output is identical for any worker count.
inline std::vector<UnitReport> analyze_files(const std::vector<SourceFile>& files,
                                             const LevelMapping& mapping, int workers = 0) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
    workers = std::min<int>(workers, files.empty() ? 1 : static_cast<int>(files.size()));

    std::vector<FileReport> reports(files.size());
    if (workers <= 1) {
        for (size_t i = 0; i < files.size(); ++i) reports[i] = analyze_file(files[i], mapping);
    } else {
        std::atomic<size_t> next{0};
        auto work = [&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= files.size()) return;
                reports[i] = analyze_file(files[i], mapping);
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    std::vector<std::string> unit_order;
    std::vector<std::vector<FileReport>> grouped;
    for (size_t i = 0; i < files.size(); ++i) {
        const std::string& unit = files[i].unit;
        size_t slot = 0;
        for (; slot < unit_order.size(); ++slot)
            if (unit_order[slot] == unit) break;
        if (slot == unit_order.size()) {
            unit_order.push_back(unit);
            grouped.emplace_back();
        }
        grouped[slot].push_back(std::move(reports[i]));
    }

    std::vector<UnitReport> run;
    run.reserve(unit_order.size());
    for (size_t i = 0; i < unit_order.size(); ++i)
        run.push_back(summarize_unit(unit_order[i], std::move(grouped[i])));
    return run;
}

namespace run_detail {

inline std::string read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedConfigError("cannot read config file '" + path + "'", 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot write " + path.string());
    out << content;
    if (!out) throw OutputError("failed while writing " + path.string());
}

}  // namespace run_detail

/// Full pipeline behind the CLI. Exit codes: 0 success (parse failures are
/// reported, not fatal), 1 configuration or output problems, 2 ingestion
/// (clone / API / missing input) problems.
inline int run(const RunConfig& config, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    if (!config.print_terminal && !config.write_json && !config.write_csv && !config.write_html) {
        err << "error: --quiet with no output formats selected; nothing to do\n";
        return 1;
    }

    LevelMapping mapping = LevelMapping::built_in_default();
    if (!config.levels_config_path.empty()) {
        try {
            mapping = LevelMapping::from_config(
                run_detail::read_config_file(config.levels_config_path));
        } catch (const std::exception& e) {
            err << "error: invalid level config '" << config.levels_config_path
                << "': " << e.what() << "\n";
            return 1;
        }
    }
    verify_rules_covered(mapping);

    std::vector<SourceFile> files;
    try {
        IngestOptions options;
        options.workdir = config.workdir;
        options.keep_clones = config.keep_clones;
        options.exclude_forks = config.exclude_forks;
        options.api = config.api;
        std::unique_ptr<HostingApi> live_api;
        if (options.api == nullptr && config.source.kind == SourceKind::HostingUser) {
            live_api = std::make_unique<GithubRestApi>();
            options.api = live_api.get();
        }
        files = discover_files(config.source, options);
    } catch (const IngestError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<UnitReport> reports = analyze_files(files, mapping, config.workers);

    try {
        if (config.write_json || config.write_csv || config.write_html)
            std::filesystem::create_directories(config.output_dir);
        std::string json_text;
        if (config.write_json || config.write_html) json_text = to_json(reports);
        if (config.write_json)
            run_detail::write_text_file(config.output_dir / "report.json", json_text);
        if (config.write_csv)
            run_detail::write_text_file(config.output_dir / "report.csv", to_csv(reports));
        if (config.write_html) write_html_report(reports, config.output_dir / "html", json_text);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (config.print_terminal) out << to_terminal(reports);
    return 0;
}

}  // namespace pyfluency

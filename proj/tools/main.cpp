// pyfluency command line: rate the Python proficiency level needed to read a
// file, a directory, a git repository or every Python repository of a GitHub
// user.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pyfluency/analyze.hpp"

namespace {

int run_cli(int argc, char** argv) {
    CLI::App app{"Rates Python sources by the CEFR-style proficiency level (A1-C2) "
                 "required to understand them."};
    app.require_subcommand(1);
    app.fallthrough();

    std::string levels_path;
    std::string output_dir = "cefr-out";
    std::vector<std::string> formats;
    int workers = 0;
    bool quiet = false;
    bool keep_clones = false;
    bool exclude_forks = false;

    app.add_option("--levels", levels_path, "Level mapping override file");
    app.add_option("--out", output_dir, "Output directory for report files")
        ->capture_default_str();
    app.add_option("--format", formats,
                   "Report formats to write: json, csv, html (terminal is printed by default)")
        ->delimiter(',');
    app.add_option("--workers", workers, "Parallel parse/detect workers (default: logical CPUs)");
    app.add_flag("--quiet", quiet, "Suppress the terminal summary");
    app.add_flag("--keep-clones", keep_clones, "Keep cloned repositories on disk");
    app.add_flag("--exclude-forks", exclude_forks, "Skip forked repositories for user sources");

    std::string file_path, dir_path, repo_url, user_name;
    CLI::App* file_cmd = app.add_subcommand("file", "Analyze a single .py file");
    file_cmd->add_option("path", file_path, "Python file")->required();
    CLI::App* dir_cmd = app.add_subcommand("dir", "Analyze every .py file under a directory");
    dir_cmd->add_option("path", dir_path, "Directory root")->required();
    CLI::App* repo_cmd = app.add_subcommand("repo", "Shallow-clone and analyze a git repository");
    repo_cmd->add_option("url", repo_url, "Cloneable git URL")->required();
    CLI::App* user_cmd =
        app.add_subcommand("user", "Analyze all Python repositories of a GitHub user");
    user_cmd->add_option("name", user_name, "GitHub username")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    pyfluency::RunConfig config;
    if (file_cmd->parsed()) {
        if (file_path.size() < 3 || file_path.substr(file_path.size() - 3) != ".py") {
            std::cerr << "error: '" << file_path << "' is not a .py file\n";
            return 1;
        }
        config.source = {pyfluency::SourceKind::File, file_path};
    } else if (dir_cmd->parsed()) {
        config.source = {pyfluency::SourceKind::Directory, dir_path};
    } else if (repo_cmd->parsed()) {
        config.source = {pyfluency::SourceKind::GitUrl, repo_url};
    } else {
        config.source = {pyfluency::SourceKind::HostingUser, user_name};
    }

    for (const std::string& format : formats) {
        if (format == "json") config.write_json = true;
        else if (format == "csv") config.write_csv = true;
        else if (format == "html") config.write_html = true;
        else if (format == "terminal") continue;  // printed by default
        else {
            std::cerr << "error: unknown format '" << format
                      << "' (expected json, csv, html or terminal)\n";
            return 1;
        }
    }
    config.levels_config_path = levels_path;
    config.output_dir = output_dir;
    config.print_terminal = !quiet;
    config.workers = workers;
    config.keep_clones = keep_clones;
    config.exclude_forks = exclude_forks;

    return pyfluency::run(config);
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }

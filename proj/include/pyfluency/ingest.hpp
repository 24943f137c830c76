#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pyfluency/github.hpp"
#include "pyfluency/source.hpp"

namespace pyfluency {

enum class SourceKind { File, Directory, GitUrl, HostingUser };

struct SourceSpec {
    SourceKind kind;
    std::string value;
};

struct IngestOptions {
    std::filesystem::path workdir;  // clone scratch space; a temp dir when empty
    bool keep_clones = false;
    bool exclude_forks = false;
    HostingApi* api = nullptr;  // required for HostingUser
    int clone_workers = 4;
};

namespace ingest_detail {

/// Directory names never descended into during discovery.
inline constexpr std::array<std::string_view, 4> kSkippedDirs = {".git", ".hg", ".svn",
                                                                 "__pycache__"};

inline bool dir_is_skipped(const std::string& name) {
    return std::find(kSkippedDirs.begin(), kSkippedDirs.end(), name) != kSkippedDirs.end();
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

inline void collect_py_files(const std::filesystem::path& dir, const std::string& rel_prefix,
                             std::vector<std::pair<std::string, std::filesystem::path>>& out) {
    namespace fs = std::filesystem;
    std::vector<fs::directory_entry> entries;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) entries.push_back(entry);
    std::sort(entries.begin(), entries.end(),
              [](const fs::directory_entry& a, const fs::directory_entry& b) {
                  return a.path().filename().string() < b.path().filename().string();
              });
    for (const fs::directory_entry& entry : entries) {
        std::string name = entry.path().filename().string();
        if (entry.is_directory()) {
            if (entry.is_symlink() || dir_is_skipped(name)) continue;
            collect_py_files(entry.path(), rel_prefix + name + "/", out);
        } else if (entry.is_regular_file() && name.size() > 3 &&
                   name.substr(name.size() - 3) == ".py") {
            out.emplace_back(rel_prefix + name, entry.path());
        }
    }
}

inline std::vector<SourceFile> walk_unit(const std::filesystem::path& root,
                                         const std::string& unit) {
    std::vector<std::pair<std::string, std::filesystem::path>> paths;
    collect_py_files(root, "", paths);
    std::sort(paths.begin(), paths.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SourceFile> files;
    files.reserve(paths.size());
    for (auto& [rel, full] : paths) {
        SourceFile file;
        file.path = full.string();
        file.rel_path = rel;
        file.unit = unit;
        file.content = read_file(full);
        files.push_back(std::move(file));
    }
    return files;
}

inline std::string shell_quote(std::string_view arg) {
    std::string quoted = "'";
    for (char c : arg) {
        if (c == '\'') quoted += "'\\''";
        else quoted += c;
    }
    quoted += "'";
    return quoted;
}

inline std::string repo_name_from_url(std::string_view url) {
    while (!url.empty() && url.back() == '/') url.remove_suffix(1);
    size_t slash = url.find_last_of('/');
    std::string name(slash == std::string_view::npos ? url : url.substr(slash + 1));
    if (name.size() > 4 && name.substr(name.size() - 4) == ".git")
        name.resize(name.size() - 4);
    return name.empty() ? "repository" : name;
}

/// Shallow clone via the git executable; stderr is captured for diagnostics.
inline void clone_repo(const std::string& url, const std::filesystem::path& dest) {
    std::string command = "git clone --depth 1 --quiet " + shell_quote(url) + " " +
                          shell_quote(dest.string()) + " 2>&1";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) throw CloneFailedError("cannot run git to clone " + url);
    std::string output;
    char buf[512];
    while (size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    int status = ::pclose(pipe);
    if (status != 0) {
        if (output.size() > 400) output = output.substr(0, 400) + "...";
        throw CloneFailedError("git clone failed for " + url + ": " + output);
    }
}

inline std::filesystem::path unique_temp_dir() {
    namespace fs = std::filesystem;
    std::random_device rd;
    std::uniform_int_distribution<unsigned> dist;
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::ostringstream name;
        name << "pyfluency-" << std::hex << dist(rd);
        fs::path candidate = fs::temp_directory_path() / name.str();
        std::error_code ec;
        if (fs::create_directories(candidate, ec) && !ec) return candidate;
    }
    throw IngestError("cannot create a temporary clone directory");
}

struct ScratchDir {
    std::filesystem::path path;
    bool owned = false;
    bool keep = false;

    ~ScratchDir() {
        if (owned && !keep) {
            std::error_code ec;
            std::filesystem::remove_all(path, ec);
        }
    }
};

inline std::vector<SourceFile> ingest_repos(const std::vector<RepoRef>& repos,
                                            const IngestOptions& options) {
    namespace fs = std::filesystem;
    ScratchDir scratch;
    scratch.keep = options.keep_clones;
    if (options.workdir.empty()) {
        scratch.path = unique_temp_dir();
        scratch.owned = true;
    } else {
        scratch.path = options.workdir;
        std::error_code ec;
        fs::create_directories(scratch.path, ec);
        scratch.owned = !options.keep_clones;
    }

    std::vector<std::vector<SourceFile>> per_repo(repos.size());
    std::vector<std::exception_ptr> errors(repos.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= repos.size()) return;
            try {
                fs::path dest = scratch.path / (std::to_string(i) + "-" + repos[i].name);
                clone_repo(repos[i].clone_url, dest);
                per_repo[i] = walk_unit(dest, repos[i].name);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    int workers = std::max(1, std::min<int>(options.clone_workers,
                                            static_cast<int>(repos.size())));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& error : errors)
        if (error) std::rethrow_exception(error);

    std::vector<SourceFile> files;
    for (std::vector<SourceFile>& repo_files : per_repo)
        for (SourceFile& file : repo_files) files.push_back(std::move(file));
    return files;
}

}  // namespace ingest_detail

/// Resolves a source spec into the Python files it denotes. Directory walks
/// are recursive, sorted, skip symlinked directories and VCS metadata, and
/// only pick up `.py` files.
inline std::vector<SourceFile> discover_files(const SourceSpec& spec,
                                              const IngestOptions& options = {}) {
    namespace fs = std::filesystem;
    using namespace ingest_detail;

    switch (spec.kind) {
    case SourceKind::File: {
        fs::path path(spec.value);
        if (!fs::exists(path) || !fs::is_regular_file(path))
            throw NotFoundError("no such file: " + spec.value);
        SourceFile file;
        file.path = path.string();
        file.rel_path = path.filename().string();
        file.unit = path.filename().string();
        file.content = read_file(path);
        return {std::move(file)};
    }
    case SourceKind::Directory: {
        fs::path path(spec.value);
        if (!fs::exists(path) || !fs::is_directory(path))
            throw NotFoundError("no such directory: " + spec.value);
        fs::path canonical = fs::weakly_canonical(path);
        std::string unit = canonical.filename().string();
        if (unit.empty()) unit = canonical.string();
        return walk_unit(path, unit);
    }
    case SourceKind::GitUrl: {
        RepoRef repo;
        repo.name = repo_name_from_url(spec.value);
        repo.clone_url = spec.value;
        repo.primary_language = "Python";
        return ingest_repos({repo}, options);
    }
    case SourceKind::HostingUser: {
        if (options.api == nullptr)
            throw IngestError("no hosting API client configured for user ingestion");
        std::vector<RepoRef> repos =
            list_user_repos(*options.api, spec.value, options.exclude_forks);
        return ingest_repos(repos, options);
    }
    }
    throw IngestError("unknown source kind");
}

}  // namespace pyfluency

#pragma once

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pyfluency {

class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

class NotFoundError : public IngestError {
public:
    explicit NotFoundError(const std::string& what) : IngestError(what) {}
};

class CloneFailedError : public IngestError {
public:
    explicit CloneFailedError(const std::string& what) : IngestError(what) {}
};

class ApiError : public IngestError {
public:
    ApiError(int status, const std::string& detail)
        : IngestError("GitHub API error (HTTP " + std::to_string(status) + "): " + detail),
          status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class UserNotFoundError : public IngestError {
public:
    explicit UserNotFoundError(const std::string& user)
        : IngestError("GitHub user not found: " + user) {}
};

class RateLimitedError : public IngestError {
public:
    explicit RateLimitedError(std::int64_t reset_epoch)
        : IngestError("GitHub API rate limit exhausted; resets at " +
                      format_reset(reset_epoch)),
          reset_epoch_(reset_epoch) {}
    std::int64_t reset_epoch() const { return reset_epoch_; }

    static std::string format_reset(std::int64_t epoch) {
        if (epoch <= 0) return "an unknown time";
        std::time_t t = static_cast<std::time_t>(epoch);
        std::tm tm_utc{};
        gmtime_r(&t, &tm_utc);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%d %H:%M:%S UTC", &tm_utc);
        return std::string(buf) + " (epoch " + std::to_string(epoch) + ")";
    }

private:
    std::int64_t reset_epoch_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;

    std::string header(std::string_view name) const {
        for (const auto& [key, value] : headers) {
            if (key.size() != name.size()) continue;
            bool equal = true;
            for (size_t i = 0; i < key.size(); ++i) {
                char a = key[i], b = name[i];
                if (a >= 'A' && a <= 'Z') a += 32;
                if (b >= 'A' && b <= 'Z') b += 32;
                if (a != b) {
                    equal = false;
                    break;
                }
            }
            if (equal) return value;
        }
        return "";
    }
};

/// Minimal hosting-API surface; production code talks HTTPS, tests feed
/// recorded responses through the same interface.
class HostingApi {
public:
    virtual ~HostingApi() = default;
    virtual HttpResponse get(const std::string& path_and_query) = 0;
};

struct RepoRef {
    std::string name;
    std::string clone_url;
    std::string primary_language;
    bool is_fork = false;
};

namespace github_detail {

inline std::string body_excerpt(const std::string& body) {
    constexpr size_t kMax = 200;
    if (body.size() <= kMax) return body;
    return body.substr(0, kMax) + "...";
}

inline void raise_for_status(const HttpResponse& response, const std::string& user) {
    if (response.status == 404) throw UserNotFoundError(user);
    if (response.status == 403 || response.status == 429) {
        if (response.header("X-RateLimit-Remaining") == "0") {
            std::int64_t reset = 0;
            std::string raw = response.header("X-RateLimit-Reset");
            if (!raw.empty()) reset = std::strtoll(raw.c_str(), nullptr, 10);
            throw RateLimitedError(reset);
        }
    }
    if (response.status != 200)
        throw ApiError(response.status, body_excerpt(response.body));
}

}  // namespace github_detail

/// All public repositories of `user` whose reported primary language is
/// Python, across every page of `GET /users/{user}/repos`.
inline std::vector<RepoRef> list_user_repos(HostingApi& api, const std::string& user,
                                            bool exclude_forks = false) {
    constexpr int kPerPage = 100;
    std::vector<RepoRef> repos;
    for (int page = 1;; ++page) {
        std::string path = "/users/" + user + "/repos?per_page=" + std::to_string(kPerPage) +
                           "&page=" + std::to_string(page);
        HttpResponse response = api.get(path);
        github_detail::raise_for_status(response, user);

        nlohmann::json array = nlohmann::json::parse(response.body, nullptr,
                                                     /*allow_exceptions=*/false);
        if (array.is_discarded() || !array.is_array())
            throw ApiError(response.status, "expected a JSON array of repositories");

        for (const auto& entry : array) {
            RepoRef repo;
            repo.name = entry.value("name", "");
            repo.clone_url = entry.value("clone_url", "");
            if (entry.contains("language") && entry["language"].is_string())
                repo.primary_language = entry["language"].get<std::string>();
            repo.is_fork = entry.value("fork", false);
            if (repo.primary_language != "Python") continue;
            if (exclude_forks && repo.is_fork) continue;
            repos.push_back(std::move(repo));
        }
        if (array.size() < kPerPage) break;
    }
    return repos;
}

}  // namespace pyfluency

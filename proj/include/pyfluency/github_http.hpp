#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>

#include "pyfluency/github.hpp"

namespace pyfluency {

/// Live GitHub REST v3 transport. Sends `Authorization: token <GITHUB_TOKEN>`
/// when the environment variable is set; unauthenticated otherwise.
class GithubRestApi final : public HostingApi {
public:
    GithubRestApi() : client_("https://api.github.com") {
        client_.set_follow_location(true);
        client_.set_connection_timeout(15);
        client_.set_read_timeout(30);
        if (const char* token = std::getenv("GITHUB_TOKEN"); token != nullptr && *token != '\0')
            token_ = token;
    }

    HttpResponse get(const std::string& path_and_query) override {
        httplib::Headers headers = {{"User-Agent", "pyfluency"},
                                    {"Accept", "application/vnd.github+json"}};
        if (!token_.empty()) headers.emplace("Authorization", "token " + token_);
        httplib::Result result = client_.Get(path_and_query, headers);
        if (!result)
            throw ApiError(0, "connection to api.github.com failed: " +
                                  httplib::to_string(result.error()));
        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        for (const auto& [key, value] : result->headers) response.headers.emplace_back(key, value);
        return response;
    }

private:
    httplib::Client client_;
    std::string token_;
};

}  // namespace pyfluency

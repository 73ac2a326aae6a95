#include "argrank/http_judge.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "argrank/errors.hpp"
#include "argrank/rng.hpp"

namespace argrank::judge {

using nlohmann::json;

HttpBackend::HttpBackend(JudgeConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("http judge: endpoint_url must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = url;
    } else {
        base_url_ = url.substr(0, path_start);
        path_prefix_ = url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
}

std::string HttpBackend::id() const {
    return config_.model_name.empty() ? "http" : config_.model_name;
}

std::string HttpBackend::complete(const JudgeRequest& request, int attempt) {
    json body;
    body["model"] = config_.model_name;
    body["temperature"] = config_.temperature;
    body["messages"] = json::array({
        json{{"role", "system"}, {"content", request.prompt.system}},
        json{{"role", "user"}, {"content", request.prompt.user}},
    });
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv("ARGRANK_API_KEY")) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string last_error;
    for (int transport_attempt = 0; transport_attempt < config_.max_retries;
         ++transport_attempt) {
        if (transport_attempt > 0) {
            // 0.5s * 2^k with jitter, keyed so replays sleep identically.
            KeyedRng rng(config_.base_seed,
                         request.pair->pair_id + "\x1f" "backoff" +
                             std::to_string(attempt * config_.max_retries +
                                            transport_attempt));
            const double base_ms = 500.0 * std::pow(2.0, transport_attempt - 1);
            const double jittered = base_ms * (0.5 + 0.5 * rng.next_unit());
            std::this_thread::sleep_for(std::chrono::milliseconds(
                static_cast<long>(jittered * backoff_scale_)));
        }

        httplib::Client client(base_url_);
        client.set_connection_timeout(0, config_.timeout_ms * 1000LL);
        client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);

        auto result = client.Post(path_prefix_ + "/chat/completions", headers, payload,
                                  "application/json");
        if (!result) {
            last_error = "connection failed: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status != 200) {
            last_error = "HTTP " + std::to_string(result->status);
            // Client errors other than rate limiting will not heal on retry.
            if (result->status >= 400 && result->status < 500 && result->status != 429) {
                throw JudgeError("judge transport: " + base_url_ + " returned " +
                                 last_error + " (no retry)");
            }
            continue;
        }
        try {
            const json response = json::parse(result->body);
            return response.at("choices").at(0).at("message").at("content")
                .get<std::string>();
        } catch (const json::exception& e) {
            last_error = std::string("malformed response body: ") + e.what();
            continue;
        }
    }
    throw JudgeError("judge transport: " + base_url_ + " failed after " +
                     std::to_string(config_.max_retries) + " attempts (backoff 0.5s*2^k, "
                     "jittered): " + last_error);
}

}  // namespace argrank::judge

#pragma once

#include <string>

#include "argrank/judge.hpp"

namespace argrank::judge {

// Live judge for OpenAI-compatible chat endpoints. Sends system+user
// messages to {endpoint_url}/chat/completions with the configured model
// and temperature; the bearer token comes from the ARGRANK_API_KEY
// environment variable when set. Transport failures are retried with
// exponential backoff (0.5s * 2^k, jittered) before raising a JudgeError
// that names the endpoint and the backoff schedule.
class HttpBackend : public JudgeBackend {
public:
    explicit HttpBackend(JudgeConfig config);

    std::string id() const override;
    std::string complete(const JudgeRequest& request, int attempt) override;
    bool records_latency() const override { return true; }

    // Testing hook: scale backoff sleeps (1.0 = real time).
    void set_backoff_scale(double scale) { backoff_scale_ = scale; }

private:
    JudgeConfig config_;
    std::string base_url_;     // scheme://host[:port]
    std::string path_prefix_;  // e.g. "/v1"
    double backoff_scale_ = 1.0;
};

}  // namespace argrank::judge

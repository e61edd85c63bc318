// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "guiprobe/agents.hpp"
#include "guiprobe/digest.hpp"
#include "guiprobe/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

namespace guiprobe {

struct RemoteAgentConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    // Name of the environment variable holding the API key. The key itself
    // never enters a config file, log or run record.
    std::string credential_env = "GUIPROBE_API_KEY";
    double timeout_seconds = 60.0;
    int max_retries = 3;
    double temperature = 1.0;
    std::chrono::milliseconds backoff_initial{1000};
};

// Holds the API key; deliberately not printable or serializable.
class Secret {
public:
    Secret() = default;
    explicit Secret(std::string value) : value_(std::move(value)) {}

    static Secret from_env(const std::string& variable) {
        const char* v = std::getenv(variable.c_str());
        if (!v || !*v) throw ConfigError("environment variable " + variable + " is not set");
        return Secret(v);
    }

    const std::string& reveal() const { return value_; }
    bool empty() const { return value_.empty(); }

private:
    std::string value_;
};

struct EndpointUrl {
    std::string scheme_host_port;
    std::string path;
};

inline EndpointUrl split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

// Chat-completion body: one user message holding the rendered prompt as a
// text part followed by every attachment as a base64 image part.
inline nlohmann::json build_chat_request(const AgentRequest& req, const std::string& model, double temperature) {
    nlohmann::json content = nlohmann::json::array();
    content.push_back({{"type", "text"}, {"text", req.prompt.render()}});
    for (const auto& img : req.prompt.attachments) {
        content.push_back({{"type", "image_url"},
                           {"image_url", {{"url", "data:" + img.media_type + ";base64," + base64_encode(img.data)}}}});
    }
    return {
        {"model", model},
        {"temperature", temperature},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})},
    };
}

inline std::string extract_completion_text(const std::string& body) {
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw AgentError(AgentError::Kind::Service, "chat completion response is not JSON");
    try {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_string()) return content.get<std::string>();
        std::string text;
        for (const auto& part : content)
            if (part.value("type", "") == "text") text += part.value("text", "");
        return text;
    } catch (const nlohmann::json::exception&) {
        throw AgentError(AgentError::Kind::Service, "chat completion response lacks choices[0].message.content");
    }
}

class RemoteAgent final : public Agent {
public:
    RemoteAgent(RemoteAgentConfig config, Secret credential)
        : config_(std::move(config)), credential_(std::move(credential)), url_(split_endpoint(config_.endpoint)) {}

    // Reads the credential from config.credential_env.
    explicit RemoteAgent(RemoteAgentConfig config)
        : RemoteAgent(config, Secret::from_env(config.credential_env)) {}

    std::string respond(const AgentRequest& request) override {
        check_request(request);
        const auto body = build_chat_request(request, config_.model, config_.temperature).dump();

        std::lock_guard lock(mutex_);
        httplib::Client client(url_.scheme_host_port);
        const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::duration<double>(config_.timeout_seconds));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        httplib::Headers headers;
        if (!credential_.empty()) headers.emplace("Authorization", "Bearer " + credential_.reveal());

        std::string last_error;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            if (attempt > 0) sleep_(config_.backoff_initial * (1 << (attempt - 1)));
            auto res = client.Post(url_.path, headers, body, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "service returned HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status < 200 || res->status >= 300)
                throw AgentError(AgentError::Kind::Service, "service returned HTTP " + std::to_string(res->status));
            return extract_completion_text(res->body);
        }
        throw AgentError(AgentError::Kind::Transport,
                         last_error + " after " + std::to_string(config_.max_retries + 1) + " attempts");
    }

    std::string kind() const override { return "remote"; }

    // Test hook so retry tests need not wait for real backoff.
    void set_sleep(std::function<void(std::chrono::milliseconds)> sleep) { sleep_ = std::move(sleep); }

private:
    RemoteAgentConfig config_;
    Secret credential_;
    EndpointUrl url_;
    std::mutex mutex_;
    std::function<void(std::chrono::milliseconds)> sleep_ = [](std::chrono::milliseconds d) {
        std::this_thread::sleep_for(d);
    };
};

} // namespace guiprobe

#include "normlens/http_ports.hpp"

#include <future>
#include <thread>

#include <httplib.h>

#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::ports {

Endpoint Endpoint::parse(const std::string& url) {
    const std::string_view u = util::trim(url);
    if (u.substr(0, 8) == "https://")
        throw Error(ErrorCode::malformed_input, "https endpoints are not supported in this build: " + url);
    if (u.substr(0, 7) != "http://")
        throw Error(ErrorCode::malformed_input, "endpoint must start with http://: " + url);
    const auto slash = u.find('/', 7);
    Endpoint e;
    e.origin = std::string(u.substr(0, slash));
    if (e.origin.size() <= 7) throw Error(ErrorCode::malformed_input, "endpoint has no host: " + url);
    if (slash != std::string_view::npos) {
        auto prefix = u.substr(slash);
        while (!prefix.empty() && prefix.back() == '/') prefix.remove_suffix(1);
        e.path_prefix = std::string(prefix);
    }
    return e;
}

namespace {

httplib::Client make_client(const Endpoint& endpoint, const HttpOptions& options) {
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);
    return client;
}

bool retryable(int status) { return status == 408 || status == 429 || status >= 500; }

nlohmann::json parse_body(const std::string& body, const std::string& what) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded())
        throw Error(ErrorCode::backend_unavailable, what + ": response is not valid JSON");
    return j;
}

}  // namespace

nlohmann::json post_json(const Endpoint& endpoint, const std::string& path,
                         const nlohmann::json& body, const HttpOptions& options,
                         const std::string& bearer_token) {
    const std::string target = endpoint.path_prefix + path;
    const std::string what = "POST " + endpoint.origin + target;
    const std::string payload = body.dump();
    httplib::Headers headers;
    if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);

    std::string last_error;
    for (int attempt = 0; attempt <= std::max(0, options.retries); ++attempt) {
        auto client = make_client(endpoint, options);
        auto res = client.Post(target, headers, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return parse_body(res->body, what);
        last_error = "HTTP " + std::to_string(res->status);
        if (!retryable(res->status)) break;
    }
    throw Error(ErrorCode::backend_unavailable, what + " failed: " + last_error);
}

// ---------------------------------------------------------------------------

SidecarClient::SidecarClient(std::string base_url, HttpOptions options, std::size_t max_in_flight)
    : base_url_(std::move(base_url)),
      endpoint_(Endpoint::parse(base_url_)),
      options_(options),
      max_in_flight_(std::max<std::size_t>(1, max_in_flight)) {}

nlohmann::json SidecarClient::classify_request(std::string_view task,
                                               std::span<const std::string> sentences) {
    return {{"task", std::string(task)},
            {"sentences", std::vector<std::string>(sentences.begin(), sentences.end())}};
}

std::vector<nlohmann::json> SidecarClient::run_batches(std::string_view task,
                                                       std::span<const std::string> sentences) {
    std::vector<std::span<const std::string>> batches;
    for (std::size_t i = 0; i < sentences.size(); i += kMaxBatch)
        batches.push_back(sentences.subspan(i, std::min(kMaxBatch, sentences.size() - i)));

    std::vector<nlohmann::json> responses(batches.size());
    for (std::size_t start = 0; start < batches.size(); start += max_in_flight_) {
        const auto end = std::min(batches.size(), start + max_in_flight_);
        std::vector<std::future<nlohmann::json>> inflight;
        for (std::size_t b = start; b < end; ++b)
            inflight.push_back(std::async(std::launch::async, [this, task, batch = batches[b]] {
                return post_json(endpoint_, "/classify", classify_request(task, batch), options_);
            }));
        for (std::size_t b = start; b < end; ++b) responses[b] = inflight[b - start].get();
    }
    for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto& r = responses[b];
        if (!r.is_object() || !r.contains("model_version"))
            throw Error(ErrorCode::backend_unavailable, "sidecar response lacks model_version");
    }
    return responses;
}

std::vector<double> SidecarClient::score(std::span<const std::string> sentences) {
    std::vector<double> out;
    out.reserve(sentences.size());
    const auto responses = run_batches("formality", sentences);
    for (std::size_t b = 0; b < responses.size(); ++b) {
        const auto batch = std::min(kMaxBatch, sentences.size() - b * kMaxBatch);
        const auto it = responses[b].find("scores");
        if (it == responses[b].end() || !it->is_array() || it->size() != batch)
            throw Error(ErrorCode::backend_unavailable, "sidecar returned a malformed scores array");
        for (const auto& s : *it) {
            if (!s.is_number()) throw Error(ErrorCode::backend_unavailable, "sidecar score is not a number");
            out.push_back(s.get<double>());
        }
    }
    return out;
}

std::vector<rhetoric::NarrativeCategory> SidecarClient::classify(
    std::span<const std::string> sentences) {
    std::vector<rhetoric::NarrativeCategory> out;
    out.reserve(sentences.size());
    const auto responses = run_batches("narrative", sentences);
    for (std::size_t b = 0; b < responses.size(); ++b) {
        const auto batch = std::min(kMaxBatch, sentences.size() - b * kMaxBatch);
        const auto it = responses[b].find("labels");
        if (it == responses[b].end() || !it->is_array() || it->size() != batch)
            throw Error(ErrorCode::backend_unavailable, "sidecar returned a malformed labels array");
        for (const auto& l : *it) {
            const auto c = l.is_string() ? rhetoric::parse_category(l.get<std::string>()) : std::nullopt;
            if (!c) throw Error(ErrorCode::backend_unavailable, "sidecar returned unknown label " + l.dump());
            out.push_back(*c);
        }
    }
    return out;
}

nlohmann::json SidecarClient::health() const {
    std::string last_error;
    for (int attempt = 0; attempt <= std::max(0, options_.retries); ++attempt) {
        auto client = make_client(endpoint_, options_);
        auto res = client.Get(endpoint_.path_prefix + "/health");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return parse_body(res->body, "sidecar health");
        last_error = "HTTP " + std::to_string(res->status);
    }
    throw Error(ErrorCode::backend_unavailable, "sidecar health check failed: " + last_error);
}

std::string SidecarClient::identity() const { return "sidecar@" + base_url_; }

// ---------------------------------------------------------------------------

HttpChatClient::HttpChatClient(std::string base_url, std::string api_key, HttpOptions options)
    : base_url_(std::move(base_url)),
      endpoint_(Endpoint::parse(base_url_)),
      api_key_(std::move(api_key)),
      options_(options) {}

chat::Reply HttpChatClient::complete(const chat::Request& request) {
    const auto j = post_json(endpoint_, "/chat/completions", chat::to_json(request), options_, api_key_);
    try {
        const auto& choice = j.at("choices").at(0);
        chat::Reply reply;
        reply.content = choice.at("message").at("content").get<std::string>();
        if (auto it = choice.find("finish_reason"); it != choice.end() && it->is_string())
            reply.finish_reason = it->get<std::string>();
        return reply;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::backend_unavailable, std::string("malformed chat response: ") + e.what());
    }
}

std::string HttpChatClient::identity() const { return "chat@" + base_url_; }

}  // namespace normlens::ports

#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "normlens/chat.hpp"
#include "normlens/rhetoric.hpp"
#include "normlens/style.hpp"

namespace normlens::ports {

struct HttpOptions {
    std::chrono::milliseconds timeout{30000};
    /// Extra attempts after a failed or timed-out call.
    int retries = 1;
};

/// Splits "http://host:port/prefix" into origin and path prefix.
struct Endpoint {
    std::string origin;
    std::string path_prefix;

    static Endpoint parse(const std::string& url);
};

/// POSTs JSON and returns the parsed response body. Throws
/// Error(backend_unavailable) after the configured retries.
nlohmann::json post_json(const Endpoint& endpoint, const std::string& path,
                         const nlohmann::json& body, const HttpOptions& options,
                         const std::string& bearer_token = {});

/// Client for the classifier sidecar: POST /classify with
/// {"task": ..., "sentences": [...]} and GET /health.
class SidecarClient : public style::SentenceScorer, public rhetoric::NarrativeClassifier {
public:
    /// Sentences per /classify call.
    static constexpr std::size_t kMaxBatch = 256;

    explicit SidecarClient(std::string base_url, HttpOptions options = {},
                           std::size_t max_in_flight = 4);

    std::vector<double> score(std::span<const std::string> sentences) override;
    std::vector<rhetoric::NarrativeCategory> classify(
        std::span<const std::string> sentences) override;
    std::string identity() const override;

    /// {"status": ..., "model_version": ...}
    nlohmann::json health() const;

    /// One /classify request body for a batch.
    static nlohmann::json classify_request(std::string_view task,
                                           std::span<const std::string> sentences);

private:
    std::vector<nlohmann::json> run_batches(std::string_view task,
                                            std::span<const std::string> sentences);

    std::string base_url_;
    Endpoint endpoint_;
    HttpOptions options_;
    std::size_t max_in_flight_;
};

/// OpenAI-compatible chat completions: POST {base}/chat/completions.
class HttpChatClient : public chat::ChatClient {
public:
    HttpChatClient(std::string base_url, std::string api_key, HttpOptions options = {});

    chat::Reply complete(const chat::Request& request) override;
    std::string identity() const override;

private:
    std::string base_url_;
    Endpoint endpoint_;
    std::string api_key_;
    HttpOptions options_;
};

}  // namespace normlens::ports

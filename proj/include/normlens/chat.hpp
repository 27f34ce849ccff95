#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace normlens::chat {

struct Message {
    std::string role;
    std::string content;
};

/// Chat-completion request in the widely used OpenAI-compatible shape.
struct Request {
    std::string model;
    std::vector<Message> messages;
    double temperature = 0.0;
    double top_p = 1.0;
    int max_tokens = 16;
};

struct Reply {
    std::string content;
    /// "stop", "length", ... as reported by the backend.
    std::string finish_reason;
};

nlohmann::json to_json(const Request& request);
Request request_from_json(const nlohmann::json& j);

class ChatClient {
public:
    virtual ~ChatClient() = default;
    /// Throws Error(backend_unavailable) when the backend cannot be reached.
    virtual Reply complete(const Request& request) = 0;
    virtual std::string identity() const = 0;
};

}  // namespace normlens::chat

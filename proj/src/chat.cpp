#include "normlens/chat.hpp"

#include "normlens/error.hpp"

namespace normlens::chat {

nlohmann::json to_json(const Request& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages)
        messages.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", request.model},
            {"messages", std::move(messages)},
            {"temperature", request.temperature},
            {"top_p", request.top_p},
            {"max_tokens", request.max_tokens}};
}

Request request_from_json(const nlohmann::json& j) {
    try {
        Request r;
        r.model = j.at("model").get<std::string>();
        for (const auto& m : j.at("messages"))
            r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
        r.temperature = j.value("temperature", 0.0);
        r.top_p = j.value("top_p", 1.0);
        r.max_tokens = j.value("max_tokens", 16);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_input, std::string("chat request: ") + e.what());
    }
}

}  // namespace normlens::chat

#include "normlens/stubs.hpp"

#include <array>
#include <cctype>
#include <regex>

#include "normlens/adapt.hpp"
#include "normlens/util.hpp"

namespace normlens::stubs {

std::vector<double> ConstantScorer::score(std::span<const std::string> sentences) {
    return std::vector<double>(sentences.size(), value_);
}

std::string ConstantScorer::identity() const { return "stub-constant:" + util::format_double(value_); }

// ---------------------------------------------------------------------------

namespace {

bool contains_any(const std::string& haystack, std::initializer_list<std::string_view> needles) {
    for (auto n : needles)
        if (haystack.find(n) != std::string::npos) return true;
    return false;
}

}  // namespace

rhetoric::NarrativeCategory KeywordNarrativeClassifier::label(std::string_view sentence) {
    using rhetoric::NarrativeCategory;
    const auto s = " " + util::to_lower(sentence) + " ";
    if (contains_any(s, {"we propose", "in this paper", "this paper", "this work", "we present",
                         "we introduce", "our goal", "we aim", "we ask", "we study"}))
        return NarrativeCategory::objective;
    if (contains_any(s, {"results", "we show", "we find", "we found", "outperform", "achieves",
                         "improves", "improvement", "experiments show", "participants"}))
        return NarrativeCategory::result;
    if (contains_any(s, {"we use", "we train", "our method", "our approach", "we apply", "we design",
                         "we build", "we conduct", "we collect", "we fine-tune", "we model"}))
        return NarrativeCategory::method;
    if (contains_any(s, {"recent", "has been", "have been", "prior work", "previous", "however",
                         "widely", "remains", "existing", "traditionally"}))
        return NarrativeCategory::background;
    return NarrativeCategory::other;
}

std::vector<rhetoric::NarrativeCategory> KeywordNarrativeClassifier::classify(
    std::span<const std::string> sentences) {
    std::vector<rhetoric::NarrativeCategory> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) out.push_back(label(s));
    return out;
}

std::string KeywordNarrativeClassifier::identity() const { return "stub-keyword-narrative:v1"; }

// ---------------------------------------------------------------------------

bool RuleJudgeClient::has_quantitative_evidence(std::string_view sentence) {
    static const std::array<std::regex, 8> ignored = {
        // web addresses, DOIs, emails
        std::regex(R"((https?://|www\.|doi:|arxiv:)\S*|\S+@\S+)", std::regex::icase),
        // bracketed and parenthesized citations
        std::regex(R"(\[[0-9,;\s\-]+\])"),
        std::regex(R"(\([^()]*\b(19|20)[0-9]{2}[a-z]?\))"),
        // list markers
        std::regex(R"((^\s*|\s)\(?[0-9]+[.)]\s)"),
        // structural references
        std::regex(R"(\b(figure|figures|fig\.?|table|tables|tab\.?|section|sec\.?|appendix|theorem|lemma|algorithm|eq\.?|equation|chapter)\s*[0-9]+(\.[0-9]+)*[a-z]?)",
                   std::regex::icase),
        // historical years
        std::regex(R"(\b(in|since|by|until|from|during)\s+(1[5-9]|20)[0-9]{2}\b)", std::regex::icase),
        // math expressions
        std::regex(R"(((\b[0-9]+|\b[A-Za-z])\s*)+([=<>+*/^]\s*([0-9]+\b|[A-Za-z]\b)\s*)+)"),
        // alphanumeric names such as L2, GPT-4, Llama 2
        std::regex(R"(\b[A-Za-z]+-?[0-9]+[A-Za-z0-9]*\b|\b[A-Z][a-z]+ [0-9]+\b)"),
    };
    std::string s(sentence);
    for (const auto& re : ignored) s = std::regex_replace(s, re, " ");

    static const std::regex numeric(R"([0-9])");
    static const std::regex scale(
        R"(\b(percent|percentage points|hundreds?|thousands?|millions?|billions?|dozens)\b)",
        std::regex::icase);
    return std::regex_search(s, numeric) || std::regex_search(s, scale);
}

chat::Reply RuleJudgeClient::complete(const chat::Request& request) {
    if (request.messages.empty()) return {"no", "stop"};
    const auto& content = request.messages.back().content;
    const auto at = content.rfind(rhetoric::kSentenceMarker);
    if (at == std::string::npos) return {"no", "stop"};
    const auto sentence = std::string_view(content).substr(at + rhetoric::kSentenceMarker.size());
    return {has_quantitative_evidence(sentence) ? "yes" : "no", "stop"};
}

std::string RuleJudgeClient::identity() const { return "stub-rule-judge:v1"; }

// ---------------------------------------------------------------------------

chat::Reply EchoClient::complete(const chat::Request& request) {
    if (request.messages.empty()) return {"", "stop"};
    auto intro = adapt::extract_prompt_introduction(request.messages.back().content);
    return {intro.value_or(""), "stop"};
}

std::string EchoClient::identity() const { return "stub-echo"; }

}  // namespace normlens::stubs

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normlens/chat.hpp"
#include "normlens/rhetoric.hpp"
#include "normlens/style.hpp"

// Deterministic offline backends. They let the whole pipeline run without a
// sidecar or network; none of them is a substitute for the real models.
namespace normlens::stubs {

class ConstantScorer : public style::SentenceScorer {
public:
    explicit ConstantScorer(double value) : value_(value) {}
    std::vector<double> score(std::span<const std::string> sentences) override;
    std::string identity() const override;

private:
    double value_;
};

/// Cue-phrase labeler: "we propose" -> objective, "results" -> result, ...
class KeywordNarrativeClassifier : public rhetoric::NarrativeClassifier {
public:
    std::vector<rhetoric::NarrativeCategory> classify(
        std::span<const std::string> sentences) override;
    std::string identity() const override;

    static rhetoric::NarrativeCategory label(std::string_view sentence);
};

/// Chat backend that answers judge requests by applying the prompt's rules
/// heuristically: numbers count unless they belong to citations, list
/// markers, historical years, structural references, or model names.
class RuleJudgeClient : public chat::ChatClient {
public:
    chat::Reply complete(const chat::Request& request) override;
    std::string identity() const override;

    static bool has_quantitative_evidence(std::string_view sentence);
};

/// Generation backend that returns the introduction embedded in the
/// adaptation prompt unchanged.
class EchoClient : public chat::ChatClient {
public:
    chat::Reply complete(const chat::Request& request) override;
    std::string identity() const override;
};

}  // namespace normlens::stubs

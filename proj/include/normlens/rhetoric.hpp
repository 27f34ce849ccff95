#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normlens/chat.hpp"
#include "normlens/textprep.hpp"

namespace normlens::rhetoric {

// ---------------------------------------------------------------------------
// Quantitative evidence

enum class Verdict { yes, no };

/// Binary judge for "does this sentence contain quantitative evidence".
class Judge {
public:
    virtual ~Judge() = default;
    virtual Verdict judge(std::string_view sentence) = 0;
    virtual std::string identity() const = 0;
};

/// The bundled judge prompt (trailing whitespace removed).
std::string_view quant_evidence_prompt();

/// Marker between the prompt and the judged sentence in the user message.
inline constexpr std::string_view kSentenceMarker = "\n\n# Sentence:\n";

struct JudgeSettings {
    std::string model = "meta-llama/Llama-3.1-70B-Instruct";
    double temperature = 0.0;
    int max_tokens = 5;
};

/// Single user message: prompt, marker, then the sentence verbatim.
chat::Request build_judge_request(std::string_view sentence, const JudgeSettings& settings = {});

/// Case-insensitive "yes"/"no" prefix after leading whitespace and quotes;
/// anything else is "no".
Verdict decode_verdict(std::string_view completion);

/// Judge backed by a chat-completion client.
class LlmJudge : public Judge {
public:
    explicit LlmJudge(chat::ChatClient& client, JudgeSettings settings = {});
    Verdict judge(std::string_view sentence) override;
    std::string identity() const override;

private:
    chat::ChatClient* client_;
    JudgeSettings settings_;
};

struct QuantEvidence {
    double rate = 0.0;
    std::size_t judged = 0;
    std::size_t unjudged = 0;

    bool partial() const { return unjudged > 0; }
};

/// Fraction of sentences judged "yes". Sentences whose judge call fails are
/// excluded and counted in `unjudged`; if every call fails, or `judge` is
/// null, throws judge_unavailable.
QuantEvidence quant_evidence_rate(const text::PreparedText& doc, Judge* judge);

// ---------------------------------------------------------------------------
// Narrative organization

enum class NarrativeCategory { background, objective, method, result, other };

inline constexpr std::array<NarrativeCategory, 4> kPositionedCategories = {
    NarrativeCategory::background, NarrativeCategory::objective, NarrativeCategory::method,
    NarrativeCategory::result};

std::string_view to_string(NarrativeCategory category);
std::optional<NarrativeCategory> parse_category(std::string_view name);

class NarrativeClassifier {
public:
    virtual ~NarrativeClassifier() = default;
    virtual std::vector<NarrativeCategory> classify(std::span<const std::string> sentences) = 0;
    virtual std::string identity() const = 0;
};

/// One label per sentence. Throws classifier_unavailable when `classifier` is
/// null, fails, or returns the wrong number of labels.
std::vector<NarrativeCategory> classify_narrative(const text::PreparedText& doc,
                                                  NarrativeClassifier* classifier);

using PositionMap = std::map<NarrativeCategory, std::vector<double>>;

/// Sentence i of n sits at i/(n-1) (0.5 when n == 1). "other" is dropped.
PositionMap narrative_positions(std::span<const NarrativeCategory> labels);

/// Adjusted Fisher-Pearson sample skewness. Throws insufficient_data for
/// fewer than 3 values and zero_variance for constant input.
double skew(std::span<const double> values);

/// Per-category skew for categories with at least 3 positions and nonzero
/// variance.
std::map<NarrativeCategory, double> category_skews(const PositionMap& positions);

/// Equal-width histogram over [0,1] per category, normalized to sum to 1.
/// Throws malformed_input when bins < 2.
std::map<NarrativeCategory, std::vector<double>> positional_density(const PositionMap& positions,
                                                                    int bins);

}  // namespace normlens::rhetoric

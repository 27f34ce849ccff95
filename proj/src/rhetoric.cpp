#include "normlens/rhetoric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "normlens/bundled_data.hpp"
#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::rhetoric {

std::string_view quant_evidence_prompt() {
    static const std::string_view prompt = [] {
        auto p = bundled::quant_evidence_prompt;
        while (!p.empty() && std::isspace(static_cast<unsigned char>(p.back()))) p.remove_suffix(1);
        return p;
    }();
    return prompt;
}

chat::Request build_judge_request(std::string_view sentence, const JudgeSettings& settings) {
    chat::Request r;
    r.model = settings.model;
    r.temperature = settings.temperature;
    r.top_p = 1.0;
    r.max_tokens = settings.max_tokens;
    std::string content(quant_evidence_prompt());
    content += kSentenceMarker;
    content += sentence;
    r.messages.push_back({"user", std::move(content)});
    return r;
}

Verdict decode_verdict(std::string_view completion) {
    std::size_t i = 0;
    while (i < completion.size() &&
           (std::isspace(static_cast<unsigned char>(completion[i])) || completion[i] == '"' ||
            completion[i] == '\'' || completion[i] == '*' || completion[i] == '`'))
        ++i;
    auto rest = util::to_lower(completion.substr(i, 3));
    return rest == "yes" ? Verdict::yes : Verdict::no;
}

LlmJudge::LlmJudge(chat::ChatClient& client, JudgeSettings settings)
    : client_(&client), settings_(std::move(settings)) {}

Verdict LlmJudge::judge(std::string_view sentence) {
    auto reply = client_->complete(build_judge_request(sentence, settings_));
    return decode_verdict(reply.content);
}

std::string LlmJudge::identity() const {
    return "llm-judge/" + client_->identity() + "/" + settings_.model + "/t" +
           util::format_double(settings_.temperature) + "/prompt-" +
           util::hex64(util::fnv1a(quant_evidence_prompt()));
}

QuantEvidence quant_evidence_rate(const text::PreparedText& doc, Judge* judge) {
    if (judge == nullptr) throw Error(ErrorCode::judge_unavailable, "no judge configured");
    if (doc.sentences.empty()) throw Error(ErrorCode::empty_document, "document has no sentences");

    QuantEvidence out;
    std::size_t yes = 0;
    for (const auto& sentence : doc.sentences) {
        try {
            if (judge->judge(sentence) == Verdict::yes) ++yes;
            ++out.judged;
        } catch (const Error&) {
            ++out.unjudged;
        }
    }
    if (out.judged == 0)
        throw Error(ErrorCode::judge_unavailable, "judge failed on every sentence");
    out.rate = static_cast<double>(yes) / static_cast<double>(out.judged);
    return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(NarrativeCategory category) {
    switch (category) {
        case NarrativeCategory::background: return "background";
        case NarrativeCategory::objective: return "objective";
        case NarrativeCategory::method: return "method";
        case NarrativeCategory::result: return "result";
        case NarrativeCategory::other: return "other";
    }
    return "other";
}

std::optional<NarrativeCategory> parse_category(std::string_view name) {
    const auto lower = util::to_lower(util::trim(name));
    for (auto c : {NarrativeCategory::background, NarrativeCategory::objective,
                   NarrativeCategory::method, NarrativeCategory::result, NarrativeCategory::other})
        if (to_string(c) == lower) return c;
    return std::nullopt;
}

std::vector<NarrativeCategory> classify_narrative(const text::PreparedText& doc,
                                                  NarrativeClassifier* classifier) {
    if (classifier == nullptr)
        throw Error(ErrorCode::classifier_unavailable, "no narrative classifier configured");
    if (doc.sentences.empty()) return {};
    std::vector<NarrativeCategory> labels;
    try {
        labels = classifier->classify(doc.sentences);
    } catch (const Error& e) {
        throw Error(ErrorCode::classifier_unavailable, std::string("narrative backend: ") + e.what());
    }
    if (labels.size() != doc.sentences.size())
        throw Error(ErrorCode::classifier_unavailable,
                    "narrative backend returned " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(doc.sentences.size()) + " sentences");
    return labels;
}

PositionMap narrative_positions(std::span<const NarrativeCategory> labels) {
    PositionMap out;
    const auto n = labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == NarrativeCategory::other) continue;
        const double pos = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
        out[labels[i]].push_back(pos);
    }
    return out;
}

double skew(std::span<const double> values) {
    const auto n = values.size();
    if (n < 3) throw Error(ErrorCode::insufficient_data, "skew needs at least 3 values");
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; }))
        throw Error(ErrorCode::zero_variance, "skew of constant values");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) throw Error(ErrorCode::zero_variance, "skew of constant values");
    const double g1 = m3 / std::pow(m2, 1.5);
    const double nd = static_cast<double>(n);
    return g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
}

std::map<NarrativeCategory, double> category_skews(const PositionMap& positions) {
    std::map<NarrativeCategory, double> out;
    for (const auto& [category, values] : positions) {
        if (category == NarrativeCategory::other || values.size() < 3) continue;
        try {
            out[category] = skew(values);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::zero_variance) throw;
        }
    }
    return out;
}

std::map<NarrativeCategory, std::vector<double>> positional_density(const PositionMap& positions,
                                                                    int bins) {
    if (bins < 2) throw Error(ErrorCode::malformed_input, "positional density needs >= 2 bins");
    std::map<NarrativeCategory, std::vector<double>> out;
    for (const auto& [category, values] : positions) {
        if (category == NarrativeCategory::other) continue;
        std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
        for (double p : values) {
            const double clamped = std::clamp(p, 0.0, 1.0);
            auto b = static_cast<std::size_t>(clamped * bins);
            hist[std::min(b, hist.size() - 1)] += 1.0;
        }
        if (!values.empty())
            for (double& h : hist) h /= static_cast<double>(values.size());
        out.emplace(category, std::move(hist));
    }
    return out;
}

}  // namespace normlens::rhetoric

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "normlens/chat.hpp"
#include "normlens/corpus.hpp"
#include "normlens/specificity.hpp"
#include "normlens/stats.hpp"
#include "normlens/textprep.hpp"

namespace normlens::adapt {

using corpus::CommunityId;

enum class SamplingMethod { random, specific };

std::string_view to_string(SamplingMethod method);
std::optional<SamplingMethod> parse_method(std::string_view name);

struct SamplingSpec {
    SamplingMethod method = SamplingMethod::random;
    std::size_t count = 100;
    std::uint64_t seed = 0;
};

struct SampledSource {
    std::string doc_id;
    CommunityId community;
    /// Specificity to the target; set for the specific method.
    std::optional<double> specificity;
};

struct SampleSet {
    CommunityId target;
    SamplingSpec spec;
    std::vector<SampledSource> sources;
    /// Source communities smaller than spec.count, returned whole.
    std::vector<CommunityId> truncated;
};

/// Per non-target community: a seeded uniform sample (random) or the
/// spec.count documents most specific to the target, ties broken by id
/// (specific). The specific method requires `table`.
SampleSet sample_sources(const corpus::Corpus& corpus, const CommunityId& target,
                         const SamplingSpec& spec, const specificity::NpmiTable* table = nullptr,
                         const text::AbbreviationList& abbreviations =
                             text::AbbreviationList::bundled());

/// Specificity baseline for a target: in-community documents and all other
/// documents, both scored against the target community.
stats::BaselinePair specificity_baseline(const corpus::Corpus& corpus, const CommunityId& target,
                                         const specificity::NpmiTable& table,
                                         const text::AbbreviationList& abbreviations =
                                             text::AbbreviationList::bundled());

nlohmann::json to_json(const SampleSet& set);
SampleSet sample_set_from_json(const nlohmann::json& j);

struct GenerationSpec {
    std::string model;
    double temperature = 0.7;
    double top_p = 1.0;
    int max_tokens = 4096;
    int samples_per_prompt = 5;
};

/// Version stamp of the adaptation prompt template.
inline constexpr std::string_view kPromptVersion = "adapt-v1";

std::string render_adaptation_prompt(std::string_view source_name, std::string_view target_name,
                                     std::string_view introduction);

/// The introduction embedded in a rendered prompt, if any.
std::optional<std::string> extract_prompt_introduction(std::string_view prompt);

struct Generation {
    int sample_index = 0;
    std::string text;
    bool truncated = false;
    std::string prompt_version;
    std::string prompt_hash;
};

/// samples_per_prompt independent completions of the adaptation prompt.
/// Throws backend_unavailable when `client` is null or fails.
std::vector<Generation> adapt_text(const corpus::Document& doc, std::string_view source_name,
                                   std::string_view target_name, const GenerationSpec& spec,
                                   chat::ChatClient* client);

enum class TrendVerdict { match, mismatch, no_change, undefined };

std::string_view to_string(TrendVerdict verdict);

/// match when the sign of delta agrees with direction, no_change for a zero
/// delta, undefined without a direction.
TrendVerdict trend_verdict(double delta, std::optional<stats::Direction> direction);

struct AdaptationResult {
    std::string source_id;
    CommunityId source;
    CommunityId target;
    SamplingMethod method = SamplingMethod::random;
    std::string model;
    int sample_index = 0;
    std::string prompt_version;
    std::string prompt_hash;
    bool truncated = false;
    std::string text;

    std::optional<stats::MetricRecord> before;
    std::optional<stats::MetricRecord> after;
    std::string before_config;
    std::string after_config;
    std::map<stats::Metric, double> delta;

    /// Identity of the result: (doc, target, model, method, sample).
    std::string key() const;
};

nlohmann::json to_json(const AdaptationResult& result);
AdaptationResult result_from_json(const nlohmann::json& j);

/// Fills `delta` with after - before for every metric present in both.
void compute_deltas(AdaptationResult& result);

struct DeltaRow {
    CommunityId target;
    std::string model;
    SamplingMethod method = SamplingMethod::random;
    stats::Metric metric = stats::Metric::words;
    std::size_t n = 0;
    double mean_delta = 0.0;
    std::optional<double> in;
    std::optional<double> others;
    std::optional<stats::Direction> direction;
    TrendVerdict verdict = TrendVerdict::undefined;
};

/// Mean delta per (target, model, method, metric) and its trend verdict.
/// Throws config_mismatch if any result's before/after configs differ.
std::vector<DeltaRow> evaluate_adaptations(std::span<const AdaptationResult> results,
                                           std::span<const stats::BaselinePair> baselines);

/// Fixed column order: target, model, method, metric, n, mean_delta, in,
/// others, direction, verdict.
std::string delta_table_csv(std::span<const DeltaRow> rows);

}  // namespace normlens::adapt

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "normlens/corpus.hpp"
#include "normlens/framing.hpp"
#include "normlens/rhetoric.hpp"

namespace normlens::stats {

using corpus::CommunityId;

/// The thirteen per-document metrics compared across communities, in report
/// order.
enum class Metric {
    words,
    sentences,
    has_table,
    has_figure,
    specificity,
    formality,
    readability,
    quant_evidence,
    framing_similarity,
    background_skew,
    objective_skew,
    method_skew,
    result_skew,
};

inline constexpr std::array<Metric, 13> kAllMetrics = {
    Metric::words,          Metric::sentences,          Metric::has_table,
    Metric::has_figure,     Metric::specificity,        Metric::formality,
    Metric::readability,    Metric::quant_evidence,     Metric::framing_similarity,
    Metric::background_skew, Metric::objective_skew,    Metric::method_skew,
    Metric::result_skew};

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

struct MetricRecord {
    std::string doc_id;
    CommunityId community;

    std::int64_t word_count = 0;
    std::int64_t sentence_count = 0;
    bool has_table = false;
    bool has_figure = false;

    std::optional<double> specificity;
    /// Community the specificity score was computed against.
    std::string specificity_target;
    std::optional<double> readability;
    std::optional<double> formality;
    std::optional<double> quant_evidence;
    std::size_t unjudged_sentences = 0;
    std::optional<std::vector<rhetoric::NarrativeCategory>> narrative_labels;
    std::map<rhetoric::NarrativeCategory, double> skews;
    framing::ValueVector values{};
    std::optional<double> framing_similarity;

    std::optional<double> value(Metric metric) const;
};

nlohmann::json to_json(const MetricRecord& record);
MetricRecord record_from_json(const nlohmann::json& j);

struct Interval {
    double low = 0.0;
    double high = 0.0;

    bool operator==(const Interval&) const = default;
};

/// Percentile bootstrap of the mean with counter-based resampling: draw j of
/// resample i depends only on (seed, i, j). Throws insufficient_data for
/// fewer than two values.
Interval bootstrap_ci(std::span<const double> values, int resamples = 1000, double level = 0.95,
                      std::uint64_t seed = 0);

/// Linear-interpolation quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> values);

struct MetricSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;
    Interval ci;
};

struct CommunitySummary {
    CommunityId community;
    /// Metrics with no values in this community are absent.
    std::map<Metric, MetricSummary> metrics;
};

struct SummaryOptions {
    int resamples = 1000;
    double level = 0.95;
    std::uint64_t seed = 0;
};

/// Seed for one (metric, community) cell, derived from the run seed.
std::uint64_t cell_seed(std::uint64_t run_seed, Metric metric, const CommunityId& community);

std::vector<CommunitySummary> summarize(std::span<const MetricRecord> records,
                                        const SummaryOptions& options = {});

struct NormStrength {
    CommunityId community;
    std::size_t n = 0;
    double stddev = 0.0;
};

/// Communities with at least two values, ascending by standard deviation
/// (ties by community tag).
std::vector<NormStrength> norm_strength(std::span<const MetricRecord> records, Metric metric);

enum class Direction { up, down };

std::string_view to_string(Direction direction);

struct BaselinePair {
    Metric metric;
    CommunityId target;
    double in = 0.0;
    double others = 0.0;
    /// Absent when in == others.
    std::optional<Direction> direction;
};

std::optional<Direction> expected_direction(double in, double others);

/// in = target mean; others = document-count-weighted mean of the other
/// communities. Throws unknown_community / insufficient_data.
BaselinePair baseline_pair(std::span<const CommunitySummary> summaries, Metric metric,
                           const CommunityId& target);

/// Baseline from pooled document values: in is the mean of `in_values`,
/// others the mean of `other_values`. Throws insufficient_data when either
/// is empty.
BaselinePair pooled_baseline(Metric metric, const CommunityId& target, std::span<const double> in_values,
                             std::span<const double> other_values);

/// Framing baseline: in is the target centroid's similarity to itself (1 for
/// a nonzero centroid); others is the mean similarity of out-community
/// documents to the target centroid.
BaselinePair framing_baseline(std::span<const MetricRecord> records, const CommunityId& target);

/// Value-vector centroid of a community's documents.
framing::ValueVector community_centroid(std::span<const MetricRecord> records,
                                        const CommunityId& community);

/// Fixed column order: community, metric, n, mean, stddev, ci_low, ci_high.
std::string summaries_csv(std::span<const CommunitySummary> summaries);

}  // namespace normlens::stats

#include "normlens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::stats {

namespace {

constexpr std::array<std::string_view, 13> kMetricNames = {
    "words",       "sentences",      "has_table",          "has_figure",      "specificity",
    "formality",   "readability",    "quant_evidence",     "framing_similarity",
    "background_skew", "objective_skew", "method_skew",     "result_skew"};

std::optional<rhetoric::NarrativeCategory> skew_category(Metric metric) {
    switch (metric) {
        case Metric::background_skew: return rhetoric::NarrativeCategory::background;
        case Metric::objective_skew: return rhetoric::NarrativeCategory::objective;
        case Metric::method_skew: return rhetoric::NarrativeCategory::method;
        case Metric::result_skew: return rhetoric::NarrativeCategory::result;
        default: return std::nullopt;
    }
}

template <typename T>
void put_optional(nlohmann::ordered_json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
}

std::optional<double> get_optional(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
}

}  // namespace

std::string_view to_string(Metric metric) { return kMetricNames[static_cast<std::size_t>(metric)]; }

std::optional<Metric> parse_metric(std::string_view name) {
    const auto lower = util::to_lower(util::trim(name));
    for (auto m : kAllMetrics)
        if (to_string(m) == lower) return m;
    return std::nullopt;
}

std::optional<double> MetricRecord::value(Metric metric) const {
    switch (metric) {
        case Metric::words: return static_cast<double>(word_count);
        case Metric::sentences: return static_cast<double>(sentence_count);
        case Metric::has_table: return has_table ? 1.0 : 0.0;
        case Metric::has_figure: return has_figure ? 1.0 : 0.0;
        case Metric::specificity: return specificity;
        case Metric::formality: return formality;
        case Metric::readability: return readability;
        case Metric::quant_evidence: return quant_evidence;
        case Metric::framing_similarity: return framing_similarity;
        default: break;
    }
    auto it = skews.find(*skew_category(metric));
    if (it == skews.end()) return std::nullopt;
    return it->second;
}

nlohmann::json to_json(const MetricRecord& r) {
    nlohmann::ordered_json j;
    j["doc_id"] = r.doc_id;
    j["community"] = r.community.name;
    j["words"] = r.word_count;
    j["sentences"] = r.sentence_count;
    j["has_table"] = r.has_table;
    j["has_figure"] = r.has_figure;
    put_optional(j, "specificity", r.specificity);
    j["specificity_target"] = r.specificity_target;
    put_optional(j, "formality", r.formality);
    put_optional(j, "readability", r.readability);
    put_optional(j, "quant_evidence", r.quant_evidence);
    j["unjudged_sentences"] = r.unjudged_sentences;
    if (r.narrative_labels) {
        auto labels = nlohmann::ordered_json::array();
        for (auto c : *r.narrative_labels) labels.push_back(std::string(rhetoric::to_string(c)));
        j["narrative_labels"] = std::move(labels);
    } else {
        j["narrative_labels"] = nullptr;
    }
    auto skews = nlohmann::ordered_json::object();
    for (const auto& [c, v] : r.skews) skews[std::string(rhetoric::to_string(c))] = v;
    j["skews"] = std::move(skews);
    auto values = nlohmann::ordered_json::object();
    for (auto v : framing::kAllValues)
        values[std::string(framing::to_string(v))] = r.values[static_cast<std::size_t>(v)];
    j["values"] = std::move(values);
    put_optional(j, "framing_similarity", r.framing_similarity);
    return nlohmann::json::parse(j.dump());
}

MetricRecord record_from_json(const nlohmann::json& j) {
    try {
        MetricRecord r;
        r.doc_id = j.at("doc_id").get<std::string>();
        r.community = {j.at("community").get<std::string>()};
        r.word_count = j.at("words").get<std::int64_t>();
        r.sentence_count = j.at("sentences").get<std::int64_t>();
        r.has_table = j.at("has_table").get<bool>();
        r.has_figure = j.at("has_figure").get<bool>();
        r.specificity = get_optional(j, "specificity");
        r.specificity_target = j.value("specificity_target", std::string{});
        r.formality = get_optional(j, "formality");
        r.readability = get_optional(j, "readability");
        r.quant_evidence = get_optional(j, "quant_evidence");
        r.unjudged_sentences = j.value("unjudged_sentences", std::size_t{0});
        if (auto it = j.find("narrative_labels"); it != j.end() && !it->is_null()) {
            std::vector<rhetoric::NarrativeCategory> labels;
            for (const auto& l : *it) {
                auto c = rhetoric::parse_category(l.get<std::string>());
                if (!c) throw Error(ErrorCode::malformed_input, "unknown narrative label " + l.dump());
                labels.push_back(*c);
            }
            r.narrative_labels = std::move(labels);
        }
        if (auto it = j.find("skews"); it != j.end())
            for (const auto& [k, v] : it->items()) {
                auto c = rhetoric::parse_category(k);
                if (!c) throw Error(ErrorCode::malformed_input, "unknown skew category " + k);
                r.skews[*c] = v.get<double>();
            }
        if (auto it = j.find("values"); it != j.end())
            for (const auto& [k, v] : it->items()) {
                auto value = framing::parse_value(k);
                if (!value) throw Error(ErrorCode::malformed_input, "unknown value " + k);
                r.values[static_cast<std::size_t>(*value)] = v.get<double>();
            }
        r.framing_similarity = get_optional(j, "framing_similarity");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_input, std::string("metric record: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorCode::insufficient_data, "quantile of empty data");
    q = std::clamp(q, 0.0, 1.0);
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Interval bootstrap_ci(std::span<const double> values, int resamples, double level,
                      std::uint64_t seed) {
    if (values.size() < 2) throw Error(ErrorCode::insufficient_data, "bootstrap needs >= 2 values");
    if (resamples < 1) throw Error(ErrorCode::malformed_input, "resamples must be positive");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::malformed_input, "level must be in (0,1)");

    const auto n = static_cast<std::uint64_t>(values.size());
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (int i = 0; i < resamples; ++i) {
        const std::uint64_t stream =
            util::splitmix64(seed ^ util::splitmix64(static_cast<std::uint64_t>(i) + 1));
        double sum = 0.0;
        for (std::uint64_t j = 0; j < n; ++j) {
            const std::uint64_t r = util::splitmix64(stream + j);
            const auto idx = static_cast<std::size_t>(
                (static_cast<unsigned __int128>(r) * n) >> 64);
            sum += values[idx];
        }
        means[static_cast<std::size_t>(i)] = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    return {quantile_sorted(means, alpha), quantile_sorted(means, 1.0 - alpha)};
}

std::uint64_t cell_seed(std::uint64_t run_seed, Metric metric, const CommunityId& community) {
    std::string key(to_string(metric));
    key += '\x1f';
    key += community.name;
    return util::fnv1a(key, util::splitmix64(run_seed));
}

namespace {

std::map<CommunityId, std::vector<const MetricRecord*>> by_community(
    std::span<const MetricRecord> records) {
    std::map<CommunityId, std::vector<const MetricRecord*>> out;
    for (const auto& r : records) out[r.community].push_back(&r);
    return out;
}

std::vector<double> metric_values(const std::vector<const MetricRecord*>& docs, Metric metric) {
    std::vector<double> values;
    for (const auto* r : docs)
        if (auto v = r->value(metric)) values.push_back(*v);
    return values;
}

}  // namespace

std::vector<CommunitySummary> summarize(std::span<const MetricRecord> records,
                                        const SummaryOptions& options) {
    std::vector<CommunitySummary> out;
    for (const auto& [community, docs] : by_community(records)) {
        CommunitySummary summary{community, {}};
        for (auto metric : kAllMetrics) {
            const auto values = metric_values(docs, metric);
            if (values.empty()) continue;
            MetricSummary s;
            s.n = values.size();
            s.mean = mean(values);
            s.stddev = stddev(values);
            s.ci = values.size() >= 2
                       ? bootstrap_ci(values, options.resamples, options.level,
                                      cell_seed(options.seed, metric, community))
                       : Interval{s.mean, s.mean};
            summary.metrics.emplace(metric, s);
        }
        out.push_back(std::move(summary));
    }
    return out;
}

std::vector<NormStrength> norm_strength(std::span<const MetricRecord> records, Metric metric) {
    std::vector<NormStrength> out;
    for (const auto& [community, docs] : by_community(records)) {
        const auto values = metric_values(docs, metric);
        if (values.size() < 2) continue;
        out.push_back({community, values.size(), stddev(values)});
    }
    std::stable_sort(out.begin(), out.end(), [](const NormStrength& a, const NormStrength& b) {
        if (a.stddev != b.stddev) return a.stddev < b.stddev;
        return a.community < b.community;
    });
    return out;
}

std::string_view to_string(Direction direction) {
    return direction == Direction::up ? "up" : "down";
}

std::optional<Direction> expected_direction(double in, double others) {
    if (in > others) return Direction::up;
    if (in < others) return Direction::down;
    return std::nullopt;
}

BaselinePair baseline_pair(std::span<const CommunitySummary> summaries, Metric metric,
                           const CommunityId& target) {
    const CommunitySummary* mine = nullptr;
    double weighted = 0.0;
    std::size_t weight = 0;
    for (const auto& s : summaries) {
        if (s.community == target) {
            mine = &s;
            continue;
        }
        auto it = s.metrics.find(metric);
        if (it == s.metrics.end()) continue;
        weighted += static_cast<double>(it->second.n) * it->second.mean;
        weight += it->second.n;
    }
    if (mine == nullptr) throw Error(ErrorCode::unknown_community, "no summary for " + target.name);
    auto it = mine->metrics.find(metric);
    if (it == mine->metrics.end())
        throw Error(ErrorCode::insufficient_data,
                    "no " + std::string(to_string(metric)) + " values for " + target.name);
    if (weight == 0)
        throw Error(ErrorCode::insufficient_data,
                    "no other community has " + std::string(to_string(metric)) + " values");
    BaselinePair p{metric, target, it->second.mean, weighted / static_cast<double>(weight), {}};
    p.direction = expected_direction(p.in, p.others);
    return p;
}

BaselinePair pooled_baseline(Metric metric, const CommunityId& target, std::span<const double> in_values,
                             std::span<const double> other_values) {
    if (in_values.empty() || other_values.empty())
        throw Error(ErrorCode::insufficient_data,
                    "no " + std::string(to_string(metric)) + " values to compare for " + target.name);
    BaselinePair p{metric, target, mean(in_values), mean(other_values), {}};
    p.direction = expected_direction(p.in, p.others);
    return p;
}

framing::ValueVector community_centroid(std::span<const MetricRecord> records,
                                        const CommunityId& community) {
    std::vector<framing::ValueVector> vectors;
    for (const auto& r : records)
        if (r.community == community) vectors.push_back(r.values);
    return framing::mean_vector(vectors);
}

BaselinePair framing_baseline(std::span<const MetricRecord> records, const CommunityId& target) {
    const bool known = std::any_of(records.begin(), records.end(),
                                   [&](const MetricRecord& r) { return r.community == target; });
    if (!known) throw Error(ErrorCode::unknown_community, "no documents for " + target.name);
    const auto centroid = community_centroid(records, target);
    std::vector<double> sims;
    for (const auto& r : records)
        if (r.community != target) sims.push_back(framing::framing_similarity(r.values, centroid));
    if (sims.empty())
        throw Error(ErrorCode::insufficient_data, "no out-community documents for " + target.name);
    BaselinePair p{Metric::framing_similarity, target, framing::framing_similarity(centroid, centroid),
                   mean(sims), {}};
    p.direction = expected_direction(p.in, p.others);
    return p;
}

std::string summaries_csv(std::span<const CommunitySummary> summaries) {
    std::ostringstream out;
    out << "community,metric,n,mean,stddev,ci_low,ci_high\n";
    for (const auto& s : summaries)
        for (const auto& [metric, m] : s.metrics)
            out << s.community.name << ',' << to_string(metric) << ',' << m.n << ','
                << util::format_double(m.mean) << ',' << util::format_double(m.stddev) << ','
                << util::format_double(m.ci.low) << ',' << util::format_double(m.ci.high) << '\n';
    return out.str();
}

}  // namespace normlens::stats

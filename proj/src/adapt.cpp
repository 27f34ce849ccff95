#include "normlens/adapt.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

#include "normlens/bundled_data.hpp"
#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::adapt {

std::string_view to_string(SamplingMethod method) {
    return method == SamplingMethod::random ? "random" : "specific";
}

std::optional<SamplingMethod> parse_method(std::string_view name) {
    const auto lower = util::to_lower(util::trim(name));
    if (lower == "random") return SamplingMethod::random;
    if (lower == "specific") return SamplingMethod::specific;
    return std::nullopt;
}

SampleSet sample_sources(const corpus::Corpus& corpus, const CommunityId& target,
                         const SamplingSpec& spec, const specificity::NpmiTable* table,
                         const text::AbbreviationList& abbreviations) {
    if (!corpus.communities.count(target))
        throw Error(ErrorCode::unknown_community, "target community '" + target.name + "' not in corpus");
    if (spec.count == 0) throw Error(ErrorCode::malformed_input, "sample count must be positive");
    if (spec.method == SamplingMethod::specific) {
        if (table == nullptr)
            throw Error(ErrorCode::malformed_input, "specific sampling requires an NPMI table");
        if (!table->community_index(target))
            throw Error(ErrorCode::unknown_community,
                        "target community '" + target.name + "' not in NPMI table");
    }

    SampleSet out{target, spec, {}, {}};
    for (const auto& community : corpus.communities) {
        if (community == target) continue;
        std::vector<const corpus::Document*> docs;
        for (const auto& d : corpus.documents)
            if (d.community == community) docs.push_back(&d);
        if (docs.size() < spec.count) out.truncated.push_back(community);

        std::vector<SampledSource> ranked;
        if (spec.method == SamplingMethod::random) {
            std::vector<std::pair<std::uint64_t, const corpus::Document*>> keyed;
            for (const auto* d : docs)
                keyed.emplace_back(util::splitmix64(spec.seed ^ util::fnv1a(d->id)), d);
            std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
                return std::tie(a.first, a.second->id) < std::tie(b.first, b.second->id);
            });
            for (const auto& [k, d] : keyed) ranked.push_back({d->id, community, std::nullopt});
        } else {
            for (const auto* d : docs) {
                const auto prepared = text::prepare(d->intro_text, abbreviations);
                ranked.push_back(
                    {d->id, community, specificity::specificity(prepared, target, *table).value});
            }
            std::sort(ranked.begin(), ranked.end(), [](const SampledSource& a, const SampledSource& b) {
                if (*a.specificity != *b.specificity) return *a.specificity > *b.specificity;
                return a.doc_id < b.doc_id;
            });
        }
        if (ranked.size() > spec.count) ranked.resize(spec.count);
        for (auto& s : ranked) out.sources.push_back(std::move(s));
    }
    return out;
}

stats::BaselinePair specificity_baseline(const corpus::Corpus& corpus, const CommunityId& target,
                                         const specificity::NpmiTable& table,
                                         const text::AbbreviationList& abbreviations) {
    if (!table.community_index(target))
        throw Error(ErrorCode::unknown_community, "target community '" + target.name + "' not in NPMI table");
    std::vector<double> in, others;
    for (const auto& d : corpus.documents) {
        const auto prepared = text::prepare(d.intro_text, abbreviations);
        if (prepared.sentence_count == 0) continue;
        const double v = specificity::specificity(prepared, target, table).value;
        (d.community == target ? in : others).push_back(v);
    }
    return stats::pooled_baseline(stats::Metric::specificity, target, in, others);
}

nlohmann::json to_json(const SampleSet& set) {
    nlohmann::json sources = nlohmann::json::array();
    for (const auto& s : set.sources) {
        nlohmann::json j = {{"doc_id", s.doc_id}, {"community", s.community.name}};
        j["specificity"] = s.specificity ? nlohmann::json(*s.specificity) : nlohmann::json(nullptr);
        sources.push_back(std::move(j));
    }
    nlohmann::json truncated = nlohmann::json::array();
    for (const auto& c : set.truncated) truncated.push_back(c.name);
    return {{"target", set.target.name},
            {"method", std::string(to_string(set.spec.method))},
            {"count", set.spec.count},
            {"seed", set.spec.seed},
            {"sources", std::move(sources)},
            {"truncated", std::move(truncated)}};
}

SampleSet sample_set_from_json(const nlohmann::json& j) {
    try {
        SampleSet set;
        set.target = {j.at("target").get<std::string>()};
        auto method = parse_method(j.at("method").get<std::string>());
        if (!method) throw Error(ErrorCode::malformed_input, "unknown sampling method");
        set.spec.method = *method;
        set.spec.count = j.at("count").get<std::size_t>();
        set.spec.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& s : j.at("sources")) {
            SampledSource src{s.at("doc_id").get<std::string>(), {s.at("community").get<std::string>()},
                              std::nullopt};
            if (auto it = s.find("specificity"); it != s.end() && !it->is_null())
                src.specificity = it->get<double>();
            set.sources.push_back(std::move(src));
        }
        for (const auto& c : j.at("truncated")) set.truncated.push_back({c.get<std::string>()});
        return set;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_input, std::string("sample set: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kIntroOpen = "<introduction>\n";
constexpr std::string_view kIntroClose = "\n</introduction>";

std::string_view prompt_template() {
    auto t = bundled::adaptation_prompt;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
}

}  // namespace

std::string render_adaptation_prompt(std::string_view source_name, std::string_view target_name,
                                     std::string_view introduction) {
    const auto tmpl = prompt_template();
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i);
            if (close != std::string_view::npos) {
                const auto name = tmpl.substr(i + 1, close - i - 1);
                if (name == "source" || name == "target" || name == "text") {
                    out += name == "source" ? source_name : name == "target" ? target_name : introduction;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

std::optional<std::string> extract_prompt_introduction(std::string_view prompt) {
    const auto open = prompt.find(kIntroOpen);
    const auto close = prompt.rfind(kIntroClose);
    if (open == std::string_view::npos || close == std::string_view::npos ||
        close < open + kIntroOpen.size())
        return std::nullopt;
    const auto begin = open + kIntroOpen.size();
    return std::string(prompt.substr(begin, close - begin));
}

std::vector<Generation> adapt_text(const corpus::Document& doc, std::string_view source_name,
                                   std::string_view target_name, const GenerationSpec& spec,
                                   chat::ChatClient* client) {
    if (client == nullptr) throw Error(ErrorCode::backend_unavailable, "no generation backend configured");
    const auto prompt = render_adaptation_prompt(source_name, target_name, doc.intro_text);
    const auto hash = util::hex64(util::fnv1a(prompt));

    chat::Request request;
    request.model = spec.model;
    request.temperature = spec.temperature;
    request.top_p = spec.top_p;
    request.max_tokens = spec.max_tokens;
    request.messages.push_back({"user", prompt});

    std::vector<Generation> out;
    for (int i = 0; i < spec.samples_per_prompt; ++i) {
        auto reply = client->complete(request);
        out.push_back({i, std::string(util::trim(reply.content)), reply.finish_reason == "length", std::string(kPromptVersion), hash});
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(TrendVerdict verdict) {
    switch (verdict) {
        case TrendVerdict::match: return "match";
        case TrendVerdict::mismatch: return "mismatch";
        case TrendVerdict::no_change: return "no_change";
        case TrendVerdict::undefined: return "undefined";
    }
    return "undefined";
}

TrendVerdict trend_verdict(double delta, std::optional<stats::Direction> direction) {
    if (!direction) return TrendVerdict::undefined;
    if (delta == 0.0) return TrendVerdict::no_change;
    const bool up = delta > 0.0;
    return up == (*direction == stats::Direction::up) ? TrendVerdict::match : TrendVerdict::mismatch;
}

std::string AdaptationResult::key() const {
    return source_id + '|' + target.name + '|' + model + '|' + std::string(to_string(method)) + '|' +
           std::to_string(sample_index);
}

nlohmann::json to_json(const AdaptationResult& r) {
    nlohmann::json delta = nlohmann::json::object();
    for (const auto& [m, d] : r.delta) delta[std::string(stats::to_string(m))] = d;
    return {{"source_id", r.source_id},
            {"source", r.source.name},
            {"target", r.target.name},
            {"method", std::string(to_string(r.method))},
            {"model", r.model},
            {"sample_index", r.sample_index},
            {"prompt_version", r.prompt_version},
            {"prompt_hash", r.prompt_hash},
            {"truncated", r.truncated},
            {"text", r.text},
            {"before", r.before ? stats::to_json(*r.before) : nlohmann::json(nullptr)},
            {"after", r.after ? stats::to_json(*r.after) : nlohmann::json(nullptr)},
            {"before_config", r.before_config},
            {"after_config", r.after_config},
            {"delta", std::move(delta)}};
}

AdaptationResult result_from_json(const nlohmann::json& j) {
    try {
        AdaptationResult r;
        r.source_id = j.at("source_id").get<std::string>();
        r.source = {j.at("source").get<std::string>()};
        r.target = {j.at("target").get<std::string>()};
        auto method = parse_method(j.at("method").get<std::string>());
        if (!method) throw Error(ErrorCode::malformed_input, "unknown sampling method");
        r.method = *method;
        r.model = j.at("model").get<std::string>();
        r.sample_index = j.at("sample_index").get<int>();
        r.prompt_version = j.value("prompt_version", std::string{});
        r.prompt_hash = j.value("prompt_hash", std::string{});
        r.truncated = j.value("truncated", false);
        r.text = j.value("text", std::string{});
        if (auto it = j.find("before"); it != j.end() && !it->is_null()) r.before = stats::record_from_json(*it);
        if (auto it = j.find("after"); it != j.end() && !it->is_null()) r.after = stats::record_from_json(*it);
        r.before_config = j.value("before_config", std::string{});
        r.after_config = j.value("after_config", std::string{});
        if (auto it = j.find("delta"); it != j.end())
            for (const auto& [k, v] : it->items()) {
                auto m = stats::parse_metric(k);
                if (!m) throw Error(ErrorCode::malformed_input, "unknown metric " + k);
                r.delta[*m] = v.get<double>();
            }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_input, std::string("adaptation result: ") + e.what());
    }
}

void compute_deltas(AdaptationResult& result) {
    result.delta.clear();
    if (!result.before || !result.after) return;
    for (auto m : stats::kAllMetrics) {
        const auto b = result.before->value(m);
        const auto a = result.after->value(m);
        if (a && b) result.delta[m] = *a - *b;
    }
}

std::vector<DeltaRow> evaluate_adaptations(std::span<const AdaptationResult> results,
                                           std::span<const stats::BaselinePair> baselines) {
    using Key = std::tuple<CommunityId, std::string, SamplingMethod, stats::Metric>;
    std::map<Key, std::pair<double, std::size_t>> sums;
    for (const auto& r : results) {
        if (r.before && r.after && r.before_config != r.after_config)
            throw Error(ErrorCode::config_mismatch,
                        r.key() + ": before/after computed under different metric configurations");
        for (const auto& [m, d] : r.delta) {
            auto& s = sums[{r.target, r.model, r.method, m}];
            s.first += d;
            ++s.second;
        }
    }

    std::vector<DeltaRow> rows;
    for (const auto& [key, s] : sums) {
        DeltaRow row;
        std::tie(row.target, row.model, row.method, row.metric) = key;
        row.n = s.second;
        row.mean_delta = s.first / static_cast<double>(s.second);
        for (const auto& b : baselines)
            if (b.metric == row.metric && b.target == row.target) {
                row.in = b.in;
                row.others = b.others;
                row.direction = b.direction;
                break;
            }
        row.verdict = trend_verdict(row.mean_delta, row.direction);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string delta_table_csv(std::span<const DeltaRow> rows) {
    std::ostringstream out;
    out << "target,model,method,metric,n,mean_delta,in,others,direction,verdict\n";
    for (const auto& r : rows) {
        out << r.target.name << ',' << r.model << ',' << to_string(r.method) << ','
            << stats::to_string(r.metric) << ',' << r.n << ',' << util::format_double(r.mean_delta) << ','
            << (r.in ? util::format_double(*r.in) : "") << ','
            << (r.others ? util::format_double(*r.others) : "") << ','
            << (r.direction ? stats::to_string(*r.direction) : "") << ',' << to_string(r.verdict)
            << '\n';
    }
    return out.str();
}

}  // namespace normlens::adapt

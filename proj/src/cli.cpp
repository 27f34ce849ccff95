#include "normlens/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "normlens/adapt.hpp"
#include "normlens/bundled_data.hpp"
#include "normlens/corpus.hpp"
#include "normlens/error.hpp"
#include "normlens/http_ports.hpp"
#include "normlens/pipeline.hpp"
#include "normlens/specificity.hpp"
#include "normlens/stats.hpp"
#include "normlens/stubs.hpp"
#include "normlens/util.hpp"

namespace normlens::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view suite_version() { return NORMLENS_VERSION_STRING; }

namespace {

constexpr std::string_view kBuiltinMini = "builtin:mini";
constexpr std::string_view kStub = "stub:";
constexpr std::string_view kEchoStub = "stub:echo";

struct Options {
    std::string corpus;
    std::string venue_map;
    std::string target;
    std::string method = "random";
    std::string model;
    std::uint64_t seed = 0;
    std::string out = "normlens-out";
    std::string judge_url;
    std::string sidecar_url;
    std::string gen_url;
    int resamples = 1000;
    int bins = 20;
    std::size_t count = 100;
    int samples = 5;
    double temperature = 0.7;
    int max_tokens = 4096;
};

struct Stamp {
    std::string config_hash;
};

std::string hash_parts(std::initializer_list<std::string_view> parts) {
    std::string key;
    for (auto p : parts) {
        key += p;
        key += '\x1e';
    }
    return util::hex64(util::fnv1a(key));
}

std::string path_in(const Options& o, std::string_view name) {
    return (fs::path(o.out) / std::string(name)).string();
}

std::string csv_header(const Stamp& s) {
    return "# normlens " + std::string(suite_version()) + " config_hash=" + s.config_hash + "\n";
}

void write_csv(const std::string& path, const Stamp& s, std::string_view body) {
    util::write_file(path, csv_header(s) + std::string(body));
}

json stamped(json j, const Stamp& s) {
    j["suite_version"] = std::string(suite_version());
    j["config_hash"] = s.config_hash;
    return j;
}

void write_jsonl(const std::string& path, const std::vector<json>& lines) {
    std::string body;
    for (const auto& l : lines) body += l.dump() + "\n";
    util::write_file(path, body);
}

std::vector<json> read_jsonl(const std::string& path) {
    if (!fs::exists(path)) throw Error(ErrorCode::not_found, path + " does not exist");
    std::vector<json> out;
    std::size_t line_no = 0;
    const auto body = util::read_file(path);
    for (auto raw : util::split(body, '\n')) {
        ++line_no;
        auto line = util::trim(raw);
        if (line.empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error(ErrorCode::malformed_input, path + ":" + std::to_string(line_no) + ": invalid JSON");
        out.push_back(std::move(j));
    }
    return out;
}

std::string require(const std::string& value, std::string_view flag) {
    if (value.empty()) throw Error(ErrorCode::malformed_input, std::string(flag) + " is required");
    return value;
}

std::string env_or(const std::string& value, const char* var) {
    if (!value.empty()) return value;
    const char* v = std::getenv(var);
    return v ? std::string(v) : std::string{};
}

// ---------------------------------------------------------------------------
// Inputs shared by several commands

corpus::VenueMap venue_map(const Options& o) {
    return o.venue_map.empty() ? corpus::VenueMap::bundled() : corpus::VenueMap::load(o.venue_map);
}

corpus::Corpus ingested_corpus(const Options& o) {
    const auto path = path_in(o, "corpus.jsonl");
    if (!fs::exists(path)) throw Error(ErrorCode::not_found, path + " does not exist; run ingest first");
    return corpus::load_corpus(path, venue_map(o));
}

specificity::NpmiTable npmi_table(const Options& o) {
    const auto path = path_in(o, "npmi.tsv");
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::not_found, path + " does not exist; run ingest first");
    return specificity::NpmiTable::load(in);
}

struct Ports {
    std::unique_ptr<style::SentenceScorer> formality;
    std::unique_ptr<rhetoric::NarrativeClassifier> narrative;
    std::shared_ptr<ports::SidecarClient> sidecar;
    std::unique_ptr<chat::ChatClient> judge_client;
    std::unique_ptr<rhetoric::Judge> judge;

    style::SentenceScorer* formality_port() const {
        return sidecar ? static_cast<style::SentenceScorer*>(sidecar.get()) : formality.get();
    }
    rhetoric::NarrativeClassifier* narrative_port() const {
        return sidecar ? static_cast<rhetoric::NarrativeClassifier*>(sidecar.get()) : narrative.get();
    }
};

Ports make_ports(const Options& o) {
    Ports p;
    const auto sidecar = env_or(o.sidecar_url, "NORMLENS_SIDECAR_URL");
    if (sidecar == kStub) {
        p.formality = std::make_unique<stubs::ConstantScorer>(0.5);
        p.narrative = std::make_unique<stubs::KeywordNarrativeClassifier>();
    } else if (!sidecar.empty()) {
        p.sidecar = std::make_shared<ports::SidecarClient>(sidecar);
    }
    const auto judge = env_or(o.judge_url, "NORMLENS_JUDGE_URL");
    if (judge == kStub) {
        p.judge_client = std::make_unique<stubs::RuleJudgeClient>();
    } else if (!judge.empty()) {
        const char* key = std::getenv("NORMLENS_JUDGE_KEY");
        p.judge_client = std::make_unique<ports::HttpChatClient>(judge, key ? key : "");
    }
    if (p.judge_client) p.judge = std::make_unique<rhetoric::LlmJudge>(*p.judge_client);
    return p;
}

pipeline::MetricContext metric_context(const Ports& p, const specificity::NpmiTable* table) {
    pipeline::MetricContext ctx;
    ctx.npmi = table;
    ctx.formality = p.formality_port();
    ctx.narrative = p.narrative_port();
    ctx.judge = p.judge.get();
    return ctx;
}

std::vector<stats::MetricRecord> metric_records(const Options& o, std::string* config_hash = nullptr) {
    std::vector<stats::MetricRecord> records;
    for (const auto& j : read_jsonl(path_in(o, "metrics.jsonl"))) {
        if (config_hash) *config_hash = j.value("config_hash", std::string{});
        records.push_back(stats::record_from_json(j));
    }
    if (records.empty()) throw Error(ErrorCode::empty_corpus, "metrics.jsonl has no records");
    return records;
}

std::string opt_cell(const std::optional<double>& v) { return v ? util::format_double(*v) : ""; }

// Count-and-mean summaries; enough for baselines without bootstrapping.
std::vector<stats::CommunitySummary> mean_summaries(std::span<const stats::MetricRecord> records) {
    std::map<corpus::CommunityId, stats::CommunitySummary> by;
    for (const auto& r : records) {
        auto& s = by[r.community];
        s.community = r.community;
        for (auto m : stats::kAllMetrics)
            if (auto v = r.value(m)) {
                auto& cell = s.metrics[m];
                cell.mean += *v;
                ++cell.n;
            }
    }
    std::vector<stats::CommunitySummary> out;
    for (auto& [c, s] : by) {
        for (auto& [m, cell] : s.metrics) {
            cell.mean /= static_cast<double>(cell.n);
            cell.ci = {cell.mean, cell.mean};
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Specificity and framing are scored against the target; the rest compare
// community means.
std::vector<stats::BaselinePair> baselines_for(std::span<const stats::MetricRecord> records,
                                               std::span<const stats::CommunitySummary> summaries,
                                               const std::vector<corpus::CommunityId>& targets,
                                               const corpus::Corpus& corpus,
                                               const specificity::NpmiTable& table) {
    std::vector<stats::BaselinePair> out;
    for (const auto& target : targets)
        for (auto m : stats::kAllMetrics) {
            try {
                if (m == stats::Metric::framing_similarity)
                    out.push_back(stats::framing_baseline(records, target));
                else if (m == stats::Metric::specificity)
                    out.push_back(adapt::specificity_baseline(corpus, target, table));
                else
                    out.push_back(stats::baseline_pair(summaries, m, target));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::insufficient_data) throw;
            }
        }
    return out;
}

std::vector<corpus::CommunityId> record_communities(std::span<const stats::MetricRecord> records) {
    std::set<corpus::CommunityId> set;
    for (const auto& r : records) set.insert(r.community);
    return {set.begin(), set.end()};
}

std::map<corpus::CommunityId, framing::ValueVector> centroids(std::span<const stats::MetricRecord> records) {
    std::map<corpus::CommunityId, framing::ValueVector> out;
    for (const auto& c : record_communities(records)) out[c] = stats::community_centroid(records, c);
    return out;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ingest(const Options& o, std::ostream& out) {
    const auto map = venue_map(o);
    const auto source = require(o.corpus, "--corpus");
    const auto corpus = source == kBuiltinMini
                            ? corpus::parse_corpus(bundled::mini_corpus, map, kBuiltinMini)
                            : corpus::load_corpus(source, map);
    std::string map_key;
    for (const auto& e : map.entries()) map_key += e.venue + "=" + e.community.name + ";";
    const specificity::NpmiOptions npmi_options;
    const Stamp stamp{hash_parts({"ingest", corpus.content_hash(), map_key,
                                  std::to_string(npmi_options.min_freq),
                                  std::to_string(npmi_options.min_communities)})};

    fs::create_directories(o.out);
    std::vector<json> lines;
    const auto serialized = corpus::serialize_corpus(corpus);
    for (auto line : util::split(serialized, '\n'))
        if (!util::trim(line).empty()) lines.push_back(stamped(json::parse(line), stamp));
    write_jsonl(path_in(o, "corpus.jsonl"), lines);

    std::ostringstream stats_csv;
    stats_csv << "community,name,documents\n";
    std::size_t total = 0;
    for (const auto& [c, n] : corpus::corpus_stats(corpus)) {
        stats_csv << c.name << ',' << map.display_name(c) << ',' << n << '\n';
        total += n;
    }
    write_csv(path_in(o, "corpus_stats.csv"), stamp, stats_csv.str());

    const auto table = specificity::build_npmi_table(corpus, npmi_options);
    std::ostringstream npmi;
    table.save(npmi);
    npmi << "#stamp\tsuite_version=" << suite_version() << "\tconfig_hash=" << stamp.config_hash << '\n';
    util::write_file(path_in(o, "npmi.tsv"), npmi.str());

    out << "ingest: " << total << " documents, " << corpus.communities.size() << " communities, "
        << table.vocabulary().size() << " NPMI words -> " << o.out << '\n';
    return 0;
}

std::string metrics_csv(std::span<const stats::MetricRecord> records) {
    std::ostringstream csv;
    csv << "doc_id,community";
    for (auto m : stats::kAllMetrics) csv << ',' << stats::to_string(m);
    csv << '\n';
    for (const auto& r : records) {
        csv << r.doc_id << ',' << r.community.name;
        for (auto m : stats::kAllMetrics) csv << ',' << opt_cell(r.value(m));
        csv << '\n';
    }
    return csv.str();
}

int cmd_metrics(const Options& o, std::ostream& out, std::ostream& err) {
    const auto corpus = ingested_corpus(o);
    const auto table = npmi_table(o);
    const auto ports = make_ports(o);
    const auto ctx = metric_context(ports, &table);
    const Stamp stamp{hash_parts({"metrics", corpus.content_hash(), ctx.fingerprint()})};

    std::vector<stats::MetricRecord> records;
    std::size_t warnings = 0;
    for (const auto& d : corpus.documents) {
        auto outcome = pipeline::compute_metrics({d.id, d.community, d.intro_text, {}, {}}, ctx);
        for (const auto& w : outcome.warnings) {
            err << json{{"warning", w}}.dump() << '\n';
            ++warnings;
        }
        records.push_back(std::move(outcome.record));
    }
    const auto cents = centroids(records);
    for (auto& r : records) r.framing_similarity = framing::framing_similarity(r.values, cents.at(r.community));

    std::vector<json> lines;
    for (const auto& r : records) lines.push_back(stamped(stats::to_json(r), stamp));
    write_jsonl(path_in(o, "metrics.jsonl"), lines);
    write_csv(path_in(o, "metrics.csv"), stamp, metrics_csv(records));
    out << "metrics: " << records.size() << " records, " << warnings << " warnings -> "
        << path_in(o, "metrics.jsonl") << '\n';
    return 0;
}

int cmd_compare(const Options& o, std::ostream& out) {
    const auto corpus = ingested_corpus(o);
    const auto table = npmi_table(o);
    std::string metrics_hash;
    const auto records = metric_records(o, &metrics_hash);
    const Stamp stamp{hash_parts({"compare", metrics_hash, std::to_string(o.resamples),
                                  std::to_string(o.seed), std::to_string(o.bins)})};

    const auto summaries = stats::summarize(records, {o.resamples, 0.95, o.seed});
    write_csv(path_in(o, "summaries.csv"), stamp, stats::summaries_csv(summaries));

    std::ostringstream ns;
    ns << "metric,rank,community,n,stddev\n";
    for (auto m : stats::kAllMetrics) {
        const auto ranked = stats::norm_strength(records, m);
        for (std::size_t i = 0; i < ranked.size(); ++i)
            ns << stats::to_string(m) << ',' << i + 1 << ',' << ranked[i].community.name << ','
               << ranked[i].n << ',' << util::format_double(ranked[i].stddev) << '\n';
    }
    write_csv(path_in(o, "norm_strength.csv"), stamp, ns.str());

    std::map<corpus::CommunityId, rhetoric::PositionMap> pooled;
    for (const auto& r : records) {
        if (!r.narrative_labels) continue;
        for (auto& [cat, pos] : rhetoric::narrative_positions(*r.narrative_labels)) {
            auto& dst = pooled[r.community][cat];
            dst.insert(dst.end(), pos.begin(), pos.end());
        }
    }
    std::ostringstream pd;
    pd << "community,category,bin,bin_low,bin_high,density\n";
    for (const auto& [c, positions] : pooled)
        for (const auto& [cat, hist] : rhetoric::positional_density(positions, o.bins))
            for (std::size_t b = 0; b < hist.size(); ++b)
                pd << c.name << ',' << rhetoric::to_string(cat) << ',' << b << ','
                   << util::format_double(static_cast<double>(b) / o.bins) << ','
                   << util::format_double(static_cast<double>(b + 1) / o.bins) << ','
                   << util::format_double(hist[b]) << '\n';
    write_csv(path_in(o, "positional_density.csv"), stamp, pd.str());

    const auto pairs = baselines_for(records, summaries, record_communities(records), corpus, table);
    std::ostringstream bl;
    bl << "target,metric,in,others,direction\n";
    for (const auto& p : pairs)
        bl << p.target.name << ',' << stats::to_string(p.metric) << ',' << util::format_double(p.in) << ','
           << util::format_double(p.others) << ',' << (p.direction ? stats::to_string(*p.direction) : "")
           << '\n';
    write_csv(path_in(o, "baselines.csv"), stamp, bl.str());

    out << "compare: " << summaries.size() << " communities, " << pairs.size() << " baseline pairs -> "
        << o.out << '\n';
    return 0;
}

std::string samples_name(const std::string& target, adapt::SamplingMethod method) {
    return "samples_" + target + "_" + std::string(adapt::to_string(method)) + ".json";
}

adapt::SamplingMethod method_of(const Options& o) {
    auto m = adapt::parse_method(o.method);
    if (!m) throw Error(ErrorCode::malformed_input, "--method must be random or specific");
    return *m;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
    const auto corpus = ingested_corpus(o);
    const corpus::CommunityId target{require(o.target, "--target")};
    const adapt::SamplingSpec spec{method_of(o), o.count, o.seed};
    std::optional<specificity::NpmiTable> table;
    if (spec.method == adapt::SamplingMethod::specific) table = npmi_table(o);
    const auto set = adapt::sample_sources(corpus, target, spec, table ? &*table : nullptr);
    const Stamp stamp{hash_parts({"sample", corpus.content_hash(), table ? table->fingerprint() : "",
                                  target.name, adapt::to_string(spec.method),
                                  std::to_string(spec.count), std::to_string(spec.seed)})};
    for (const auto& c : set.truncated)
        err << json{{"warning", "community '" + c.name + "' has fewer than " + std::to_string(spec.count) +
                                    " documents; all taken"}}
                   .dump()
            << '\n';
    const auto path = path_in(o, samples_name(target.name, spec.method));
    util::write_file(path, stamped(adapt::to_json(set), stamp).dump() + "\n");
    out << "sample: " << set.sources.size() << " sources -> " << path << '\n';
    return 0;
}

std::string model_of(const Options& o, const std::string& gen) {
    if (!o.model.empty()) return o.model;
    if (gen == kEchoStub) return "stub-echo";
    throw Error(ErrorCode::malformed_input, "--model is required for a remote generation backend");
}

int cmd_adapt(const Options& o, std::ostream& out) {
    const auto corpus = ingested_corpus(o);
    const auto map = venue_map(o);
    const corpus::CommunityId target{require(o.target, "--target")};
    const auto method = method_of(o);
    const auto gen = require(env_or(o.gen_url, "NORMLENS_GEN_URL"), "--gen-url");
    std::unique_ptr<chat::ChatClient> client;
    if (gen == kEchoStub) {
        client = std::make_unique<stubs::EchoClient>();
    } else {
        const char* key = std::getenv("NORMLENS_GEN_KEY");
        client = std::make_unique<ports::HttpChatClient>(gen, key ? key : "");
    }
    adapt::GenerationSpec spec;
    spec.model = model_of(o, gen);
    spec.temperature = o.temperature;
    spec.max_tokens = o.max_tokens;
    spec.samples_per_prompt = o.samples;
    if (spec.samples_per_prompt < 1) throw Error(ErrorCode::malformed_input, "--samples must be >= 1");

    const auto set_json = json::parse(util::read_file(path_in(o, samples_name(target.name, method))));
    const auto set = adapt::sample_set_from_json(set_json);
    const Stamp stamp{hash_parts({"adapt", client->identity(), spec.model, util::format_double(spec.temperature),
                                  util::format_double(spec.top_p), std::to_string(spec.max_tokens),
                                  adapt::kPromptVersion})};

    const auto path = path_in(o, "adaptations.jsonl");
    std::map<std::string, json> store;
    if (fs::exists(path))
        for (auto& j : read_jsonl(path)) {
            auto key = j.at("key").get<std::string>();
            store[key] = std::move(j);
        }

    std::size_t generated = 0;
    for (const auto& src : set.sources) {
        const auto* doc = corpus.find(src.doc_id);
        if (!doc) throw Error(ErrorCode::not_found, "sampled document '" + src.doc_id + "' not in corpus");
        adapt::AdaptationResult probe;
        probe.source_id = doc->id;
        probe.target = target;
        probe.model = spec.model;
        probe.method = method;
        bool complete = true;
        for (int i = 0; i < spec.samples_per_prompt && complete; ++i) {
            probe.sample_index = i;
            complete = store.count(probe.key()) > 0;
        }
        if (complete) continue;
        for (const auto& g : adapt::adapt_text(*doc, map.display_name(doc->community), map.display_name(target),
                                               spec, client.get())) {
            probe.sample_index = g.sample_index;
            json j = {{"key", probe.key()},
                      {"source_id", doc->id},
                      {"source", doc->community.name},
                      {"target", target.name},
                      {"method", std::string(adapt::to_string(method))},
                      {"model", spec.model},
                      {"sample_index", g.sample_index},
                      {"text", g.text},
                      {"truncated", g.truncated},
                      {"prompt_version", g.prompt_version},
                      {"prompt_hash", g.prompt_hash}};
            store[probe.key()] = stamped(std::move(j), stamp);
            ++generated;
        }
    }
    std::vector<json> lines;
    for (auto& [k, j] : store) lines.push_back(j);
    write_jsonl(path, lines);
    out << "adapt: " << generated << " new generations, " << lines.size() << " stored -> " << path << '\n';
    return 0;
}

std::vector<adapt::AdaptationResult> results_from_store(const Options& o) {
    std::vector<adapt::AdaptationResult> results;
    for (const auto& j : read_jsonl(path_in(o, "adaptation_results.jsonl")))
        results.push_back(adapt::result_from_json(j));
    return results;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
    const auto corpus = ingested_corpus(o);
    const auto table = npmi_table(o);
    const auto ports = make_ports(o);
    const auto ctx = metric_context(ports, &table);
    const auto config = ctx.fingerprint();
    std::string metrics_hash;
    const auto records = metric_records(o, &metrics_hash);
    const auto cents = centroids(records);

    std::vector<adapt::AdaptationResult> results;
    std::map<std::string, stats::MetricRecord> before_cache;
    std::size_t warnings = 0;
    auto warn = [&](const std::vector<std::string>& ws) {
        for (const auto& w : ws) {
            err << json{{"warning", w}}.dump() << '\n';
            ++warnings;
        }
    };
    for (const auto& j : read_jsonl(path_in(o, "adaptations.jsonl"))) {
        adapt::AdaptationResult r;
        r.source_id = j.at("source_id").get<std::string>();
        r.source = {j.at("source").get<std::string>()};
        r.target = {j.at("target").get<std::string>()};
        r.method = adapt::parse_method(j.at("method").get<std::string>()).value_or(adapt::SamplingMethod::random);
        r.model = j.at("model").get<std::string>();
        r.sample_index = j.at("sample_index").get<int>();
        r.text = j.at("text").get<std::string>();
        r.truncated = j.value("truncated", false);
        r.prompt_version = j.value("prompt_version", std::string{});
        r.prompt_hash = j.value("prompt_hash", std::string{});

        const auto* doc = corpus.find(r.source_id);
        if (!doc) throw Error(ErrorCode::not_found, "adapted document '" + r.source_id + "' not in corpus");
        auto cent = cents.find(r.target);
        if (cent == cents.end())
            throw Error(ErrorCode::unknown_community, "no metric records for target '" + r.target.name + "'");

        const auto cache_key = r.source_id + "|" + r.target.name;
        auto cached = before_cache.find(cache_key);
        if (cached == before_cache.end()) {
            auto outcome = pipeline::compute_metrics(
                {doc->id, doc->community, doc->intro_text, r.target, cent->second}, ctx);
            warn(outcome.warnings);
            cached = before_cache.emplace(cache_key, std::move(outcome.record)).first;
        }
        r.before = cached->second;
        r.before_config = config;
        if (util::trim(r.text).empty()) {
            warn({r.key() + ": empty adaptation; after-metrics omitted"});
        } else {
            auto outcome = pipeline::compute_metrics(
                {doc->id + "#" + std::to_string(r.sample_index), doc->community, r.text, r.target, cent->second},
                ctx);
            warn(outcome.warnings);
            r.after = std::move(outcome.record);
            r.after_config = config;
        }
        adapt::compute_deltas(r);
        results.push_back(std::move(r));
    }
    std::sort(results.begin(), results.end(),
              [](const adapt::AdaptationResult& a, const adapt::AdaptationResult& b) { return a.key() < b.key(); });

    const Stamp stamp{hash_parts({"eval", metrics_hash, config})};
    std::vector<json> lines;
    for (const auto& r : results) lines.push_back(stamped(adapt::to_json(r), stamp));
    write_jsonl(path_in(o, "adaptation_results.jsonl"), lines);

    const auto summaries = mean_summaries(records);
    const auto pairs = baselines_for(records, summaries, record_communities(records), corpus, table);
    const auto rows = adapt::evaluate_adaptations(results, pairs);
    write_csv(path_in(o, "deltas.csv"), stamp, adapt::delta_table_csv(rows));

    std::size_t nonzero = 0;
    for (const auto& row : rows)
        if (row.mean_delta != 0.0) ++nonzero;
    out << "eval: " << results.size() << " results, " << rows.size() << " delta cells (" << nonzero
        << " nonzero), " << warnings << " warnings -> " << path_in(o, "deltas.csv") << '\n';
    return 0;
}

// Scaling applied for human-readable output only.
double display_scale(stats::Metric m) {
    return m == stats::Metric::specificity || m == stats::Metric::formality ? 100.0 : 1.0;
}

std::string_view color_of(adapt::TrendVerdict v) {
    switch (v) {
        case adapt::TrendVerdict::match: return "green";
        case adapt::TrendVerdict::mismatch: return "red";
        default: return "none";
    }
}

std::string_view mark_of(adapt::TrendVerdict v) {
    switch (v) {
        case adapt::TrendVerdict::match: return "+";
        case adapt::TrendVerdict::mismatch: return "x";
        case adapt::TrendVerdict::no_change: return "=";
        default: return "?";
    }
}

// Pads to a display width counted in code points (arrows are multi-byte).
std::string pad(std::string s, std::size_t width) {
    const auto shown = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
    if (shown < width) s.append(width - shown, ' ');
    return s;
}

std::string wide_report(std::span<const adapt::DeltaRow> rows, const corpus::VenueMap& map) {
    std::map<corpus::CommunityId, std::vector<const adapt::DeltaRow*>> by_target;
    for (const auto& r : rows) by_target[r.target].push_back(&r);

    std::ostringstream out;
    out << "Delta after adaptation (specificity and formality x10^2).\n"
        << "Marks: + follows expected trend, x opposes it, = no change, ? no direction.\n";
    for (const auto& [target, trows] : by_target) {
        std::vector<std::string> columns;
        for (const auto* r : trows) {
            auto col = r->model + "/" + std::string(adapt::to_string(r->method));
            if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
        }
        out << "\nTarget: " << map.display_name(target) << " (" << target.name << ")\n";
        std::string header = pad("metric", 20) + pad("in", 12) + pad("others", 12);
        for (const auto& c : columns) header += pad(c, std::max<std::size_t>(16, c.size() + 2));
        while (!header.empty() && header.back() == ' ') header.pop_back();
        out << header << '\n';
        for (auto m : stats::kAllMetrics) {
            const adapt::DeltaRow* any = nullptr;
            std::map<std::string, const adapt::DeltaRow*> cells;
            for (const auto* r : trows)
                if (r->metric == m) {
                    any = r;
                    cells[r->model + "/" + std::string(adapt::to_string(r->method))] = r;
                }
            if (!any) continue;
            const double k = display_scale(m);
            std::string arrow = any->direction ? (*any->direction == stats::Direction::up ? " ↑" : " ↓") : "";
            std::string line = pad(std::string(stats::to_string(m)), 20) +
                               pad(any->in ? util::format_fixed(*any->in * k, 2) + arrow : "-", 12) +
                               pad(any->others ? util::format_fixed(*any->others * k, 2) : "-", 12);
            for (const auto& c : columns) {
                auto it = cells.find(c);
                const auto width = std::max<std::size_t>(16, c.size() + 2);
                line += pad(it == cells.end() ? "-"
                                              : util::format_fixed(it->second->mean_delta * k, 2) + " " +
                                                    std::string(mark_of(it->second->verdict)),
                            width);
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out << line << '\n';
        }
    }
    return out.str();
}

int cmd_report(const Options& o, std::ostream& out) {
    const auto corpus = ingested_corpus(o);
    const auto table = npmi_table(o);
    std::string metrics_hash;
    const auto records = metric_records(o, &metrics_hash);
    const auto results = results_from_store(o);
    const auto summaries = mean_summaries(records);
    const auto pairs = baselines_for(records, summaries, record_communities(records), corpus, table);
    const auto rows = adapt::evaluate_adaptations(results, pairs);
    std::string configs;
    for (const auto& r : results) configs += r.before_config + r.after_config;
    const Stamp stamp{hash_parts({"report", metrics_hash, util::hex64(util::fnv1a(configs))})};

    std::ostringstream lng;
    lng << "target,model,method,metric,in,others,direction,n,mean_delta,verdict,color\n";
    for (const auto& r : rows)
        lng << r.target.name << ',' << r.model << ',' << adapt::to_string(r.method) << ','
            << stats::to_string(r.metric) << ',' << opt_cell(r.in) << ',' << opt_cell(r.others) << ','
            << (r.direction ? stats::to_string(*r.direction) : "") << ',' << r.n << ','
            << util::format_double(r.mean_delta) << ',' << adapt::to_string(r.verdict) << ','
            << color_of(r.verdict) << '\n';
    write_csv(path_in(o, "report_long.csv"), stamp, lng.str());
    util::write_file(path_in(o, "report_wide.txt"), csv_header(stamp) + wide_report(rows, venue_map(o)));
    out << "report: " << rows.size() << " rows -> " << path_in(o, "report_long.csv") << ", "
        << path_in(o, "report_wide.txt") << '\n';
    return 0;
}

void print_error(std::ostream& err, std::string_view command, std::string_view code, std::string_view message) {
    err << json{{"error", std::string(code)}, {"command", std::string(command)}, {"message", std::string(message)}}
               .dump()
        << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Measure and compare writing norms across research communities.", "normlens"};
    app.set_version_flag("--version", std::string(suite_version()));
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--corpus", o.corpus, "Input corpus (JSON lines) or builtin:mini");
    app.add_option("--venue-map", o.venue_map, "Venue-to-community map (default: bundled)");
    app.add_option("--target", o.target, "Target community tag");
    app.add_option("--method", o.method, "Sampling method: random or specific")->capture_default_str();
    app.add_option("--model", o.model, "Generation model id");
    app.add_option("--seed", o.seed, "Run seed")->capture_default_str();
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--judge-url", o.judge_url, "Judge chat endpoint, or stub:");
    app.add_option("--sidecar-url", o.sidecar_url, "Classifier sidecar base URL, or stub:");
    app.add_option("--gen-url", o.gen_url, "Generation chat endpoint, or stub:echo");
    app.add_option("--resamples", o.resamples, "Bootstrap resamples")->capture_default_str();
    app.add_option("--bins", o.bins, "Positional density bins")->capture_default_str();
    app.add_option("--count", o.count, "Sources per community")->capture_default_str();
    app.add_option("--samples", o.samples, "Generations per prompt")->capture_default_str();
    app.add_option("--temperature", o.temperature, "Generation temperature")->capture_default_str();
    app.add_option("--max-tokens", o.max_tokens, "Generation token limit")->capture_default_str();

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"ingest", "Load a corpus, map venues, extract introductions, build the NPMI table"},
        {"metrics", "Compute per-document metrics"},
        {"compare", "Summaries, norm strength, positional density and baselines"},
        {"sample", "Sample source introductions for a target community"},
        {"adapt", "Generate adapted introductions"},
        {"eval", "Measure adaptations and compute the delta table"},
        {"report", "Long-format and wide report tables"},
    };
    for (const auto& [name, desc] : commands) app.add_subcommand(name, desc)->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        print_error(err, "", "usage", e.what());
        return 2;
    }

    const auto command = app.get_subcommands().front()->get_name();
    try {
        if (command == "ingest") return cmd_ingest(o, out);
        if (command == "metrics") return cmd_metrics(o, out, err);
        if (command == "compare") return cmd_compare(o, out);
        if (command == "sample") return cmd_sample(o, out, err);
        if (command == "adapt") return cmd_adapt(o, out);
        if (command == "eval") return cmd_eval(o, out, err);
        if (command == "report") return cmd_report(o, out);
    } catch (const Error& e) {
        print_error(err, command, to_string(e.code()), e.what());
        return 1;
    } catch (const json::exception& e) {
        print_error(err, command, to_string(ErrorCode::malformed_input), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error(err, command, to_string(ErrorCode::io_error), e.what());
        return 1;
    }
    return 1;
}

}  // namespace normlens::cli

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../support/oracles.hpp"
#include "../support/pipeline_run.hpp"
#include "normlens/adapt.hpp"
#include "normlens/error.hpp"
#include "normlens/rhetoric.hpp"
#include "normlens/specificity.hpp"
#include "normlens/stats.hpp"
#include "normlens/structural.hpp"
#include "normlens/stubs.hpp"
#include "normlens/style.hpp"
#include "normlens/util.hpp"

using namespace normlens;

namespace tol {
constexpr double npmi = 1e-9;
constexpr double flesch = 1e-6;
constexpr double skew = 1e-9;
constexpr double coverage = 0.93;
constexpr double npmi_seconds = 10.0;
constexpr double bootstrap_seconds = 30.0;
constexpr double pipeline_seconds = 5.0;
}  // namespace tol

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

// Synthetic corpus of token lists, some words shared, some rare.
std::vector<oracle::Doc> random_corpus(std::mt19937_64& rng) {
    const int communities = std::uniform_int_distribution<int>(3, 5)(rng);
    const int vocab = std::uniform_int_distribution<int>(10, 60)(rng);
    const int total = std::uniform_int_distribution<int>(100, 1000)(rng);
    std::vector<oracle::Doc> docs;
    int used = 0;
    while (used < total) {
        oracle::Doc d;
        d.community = "c" + std::to_string(std::uniform_int_distribution<int>(0, communities - 1)(rng));
        const int len = std::min(total - used, std::uniform_int_distribution<int>(5, 60)(rng));
        // Skewed draw so that some words fall below the frequency threshold.
        std::geometric_distribution<int> geo(3.0 / vocab);
        for (int i = 0; i < len; ++i) d.tokens.push_back("w" + std::to_string(std::min(geo(rng), vocab - 1)));
        used += len;
        docs.push_back(std::move(d));
    }
    // Every community must be present.
    for (int c = 0; c < communities; ++c) docs.push_back({"c" + std::to_string(c), {"w0"}});
    return docs;
}

specificity::NpmiTable table_of(const std::vector<oracle::Doc>& docs) {
    std::vector<specificity::CommunityTokens> in;
    for (const auto& d : docs) in.push_back({{d.community}, d.tokens});
    return specificity::build_npmi_table(in);
}

Outcome npmi_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20261016);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto docs = random_corpus(rng);
        const auto table = table_of(docs);
        const auto expected = oracle::npmi(docs);
        if (table.vocabulary().size() != expected.size())
            return {false, "trial " + std::to_string(trial) + ": vocabulary size " +
                               std::to_string(table.vocabulary().size()) + " vs oracle " +
                               std::to_string(expected.size())};
        for (const auto& [word, per] : expected) {
            if (!table.contains(word)) return {false, "missing word " + word};
            for (const auto& [community, score] : per) {
                const auto got = table.score(word, {community});
                if (!got) return {false, "missing cell " + word + "/" + community};
                worst = std::max(worst, std::abs(*got - score));
                ++checked;
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome o{worst <= tol::npmi && secs < tol::npmi_seconds,
              std::to_string(checked) + " cells, max |diff| " + fmt(worst) + ", " + fmt(secs) + " s"};
    return o;
}

Outcome planted_jargon() {
    std::mt19937_64 rng(7);
    const std::vector<std::string> communities{"alpha", "beta", "gamma", "delta"};
    const std::vector<std::string> shared{"the", "model", "data", "we", "results", "method", "show", "paper"};
    std::vector<oracle::Doc> docs;
    for (std::size_t c = 0; c < communities.size(); ++c)
        for (int d = 0; d < 12; ++d) {
            oracle::Doc doc{communities[c], {}};
            for (int i = 0; i < 40; ++i) {
                if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
                    doc.tokens.push_back(communities[c] + "_jargon" + std::to_string(i % 5));
                else
                    doc.tokens.push_back(shared[std::uniform_int_distribution<std::size_t>(0, shared.size() - 1)(rng)]);
            }
            docs.push_back(std::move(doc));
        }
    // Each jargon word leaks once into a neighboring community so that it
    // clears the two-community threshold.
    for (std::size_t c = 0; c < communities.size(); ++c) {
        oracle::Doc leak{communities[(c + 1) % communities.size()], {}};
        for (int k = 0; k < 5; ++k) leak.tokens.push_back(communities[c] + "_jargon" + std::to_string(k));
        docs.push_back(std::move(leak));
    }
    const auto table = table_of(docs);
    std::string detail;
    bool pass = true;
    for (const auto& target : communities) {
        double own = 0, cross = 0;
        int n_own = 0, n_cross = 0;
        for (const auto& d : docs) {
            const double s = specificity::specificity(d.tokens, {target}, table).value;
            (d.community == target ? own : cross) += s;
            ++(d.community == target ? n_own : n_cross);
        }
        own /= n_own;
        cross /= n_cross;
        pass = pass && own > cross && own > 0;
        detail += target + " " + fmt(own) + ">" + fmt(cross) + " ";
    }
    detail.pop_back();
    return {pass, detail};
}

Outcome artifact_lexicon() {
    const auto& lex = structural::ArtifactLexicon::bundled();
    const std::vector<std::string> terms{"table", "tab", "tab.", "tabs", "tabs.", "tables", "figure",
                                         "fig", "fig.", "figs", "figs.", "figures", "figure."};
    int hits = 0;
    for (const auto& t : terms) {
        const auto prepared = text::prepare("Results are in " + t + " 2 below");
        const auto m = structural::structural_metrics(prepared, lex);
        const bool is_table = t.rfind("tab", 0) == 0;
        if ((is_table ? m.has_table : m.has_figure)) ++hits;
    }
    const std::vector<std::string> adversarial{
        "The training is stable across seeds.",
        "We tabulate the counts by hand.",
        "We configure the optimizer carefully.",
        "The data are tabulated per language.",
        "Unstable gradients were clipped.",
        "A vegetable classifier labels produce.",
        "We disfigure nothing in this work.",
        "The configuration is portable.",
        "This is a notable and suitable result.",
        "Figurative language remains hard.",
        "The fight against noise continues.",
        "Stability improves with warmup.",
        "We keep tabular data separate from text.",
        "Prefiguring later work, they argued for scale.",
        "The adjustable parameter is small.",
        "Our tablet study recruited twelve users.",
        "Acceptable error rates were reached.",
        "Reconfigured pipelines run faster.",
        "Configurable figurines were counted.",
        "Taboo words were filtered.",
    };
    int false_positives = 0;
    for (const auto& s : adversarial) {
        const auto m = structural::structural_metrics(text::prepare(s), lex);
        if (m.has_table || m.has_figure) ++false_positives;
    }
    const bool lexicon_exact = lex.table_terms.size() + lex.figure_terms.size() == terms.size();
    return {hits == 13 && false_positives == 0 && lexicon_exact,
            std::to_string(hits) + "/13 terms, " + std::to_string(false_positives) +
                " false positives on 20 adversarial sentences"};
}

Outcome readability() {
    struct Fixture {
        std::vector<std::string> words;
        int syllables;  // hand-counted with the vowel-group rule
    };
    const std::vector<Fixture> fixtures{
        {{"the", "cat", "sat"}, 3},
        {{"the", "cat", "sat", "on", "the", "mat"}, 6},
        {{"we", "propose", "a", "simple", "table"}, 1 + 2 + 1 + 2 + 2},
        {{"readability", "varies", "considerably"}, 5 + 2 + 5},
        {{"models", "generalize", "poorly", "under", "distribution", "shift"}, 2 + 4 + 2 + 2 + 4 + 1},
    };
    // 206.835 - 1.015 * w - 84.6 * s / w, worked out by hand for each row.
    const std::vector<double> hand{119.19, 116.145, 66.4, -134.61, -10.755};
    double worst = 0.0;
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const double got = style::flesch_reading_ease(fixtures[i].words);
        worst = std::max(worst, std::abs(got - hand[i]));
        worst = std::max(worst, std::abs(oracle::flesch(double(fixtures[i].words.size()), fixtures[i].syllables) - hand[i]));
    }

    std::mt19937_64 rng(99);
    const std::vector<std::string> pool{"data", "model", "we", "show", "results", "improve", "the", "make",
                                        "little", "rhythm", "queue", "analysis", "simple"};
    int monotone = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<std::string> words;
        const int n = std::uniform_int_distribution<int>(2, 20)(rng);
        for (int i = 0; i < n; ++i) words.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
        const double before = style::flesch_reading_ease(words);
        auto& w = words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
        w += "ba";
        if (style::flesch_reading_ease(words) < before) ++monotone;
    }
    return {worst <= tol::flesch && monotone == 100,
            "max fixture |diff| " + fmt(worst) + ", " + std::to_string(monotone) + "/100 perturbations decrease"};
}

Outcome skew() {
    const std::vector<std::vector<double>> symmetric{
        {0.0, 0.5, 1.0}, {0.1, 0.2, 0.8, 0.9}, {0.0, 0.25, 0.5, 0.75, 1.0}, {0.3, 0.3, 0.7, 0.7, 0.5}};
    double worst_sym = 0.0;
    for (const auto& v : symmetric) worst_sym = std::max(worst_sym, std::abs(rhetoric::skew(v)));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_reflect = 0.0;
    int lists = 0;
    while (lists < 100) {
        std::vector<double> v(std::uniform_int_distribution<std::size_t>(3, 40)(rng));
        for (auto& x : v) x = unit(rng) * unit(rng);
        std::vector<double> r;
        for (double x : v) r.push_back(1.0 - x);
        try {
            worst_reflect = std::max(worst_reflect, std::abs(rhetoric::skew(v) + rhetoric::skew(r)));
            ++lists;
        } catch (const Error&) {
        }
    }

    const std::vector<double> twenty{0.00, 0.02, 0.05, 0.05, 0.08, 0.10, 0.11, 0.15, 0.18, 0.21,
                                     0.25, 0.30, 0.33, 0.41, 0.47, 0.52, 0.60, 0.71, 0.85, 1.00};
    const double oracle_diff = std::abs(rhetoric::skew(twenty) - oracle::adjusted_skew(twenty));
    return {worst_sym <= tol::skew && worst_reflect <= tol::skew && oracle_diff <= tol::skew,
            "symmetric max " + fmt(worst_sym) + ", reflection max " + fmt(worst_reflect) +
                ", 20-value |diff| " + fmt(oracle_diff)};
}

Outcome bootstrap() {
    const auto t0 = Clock::now();
    const std::vector<double> constant(25, 4.2);
    const auto flat = stats::bootstrap_ci(constant, 1000, 0.95, 3);
    const bool degenerate = flat.high - flat.low == 0.0;

    std::vector<stats::MetricRecord> records;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(500.0, 80.0);
    for (int i = 0; i < 60; ++i) {
        stats::MetricRecord r;
        r.doc_id = "d" + std::to_string(i);
        r.community = {i % 3 == 0 ? "a" : i % 3 == 1 ? "b" : "c"};
        r.word_count = static_cast<std::int64_t>(noise(rng));
        r.sentence_count = 10 + i % 7;
        records.push_back(r);
    }
    const auto first = stats::summaries_csv(stats::summarize(records, {1000, 0.95, 42}));
    const auto second = stats::summaries_csv(stats::summarize(records, {1000, 0.95, 42}));
    const bool identical = first == second;

    std::mt19937_64 gen(20261016);
    std::normal_distribution<double> normal(1.0, 2.0);
    int covered = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> sample(200);
        for (auto& x : sample) x = normal(gen);
        const auto ci = stats::bootstrap_ci(sample, 1000, 0.95, static_cast<std::uint64_t>(trial) + 1);
        if (ci.low <= 1.0 && 1.0 <= ci.high) ++covered;
    }
    const double coverage = covered / 200.0;
    const double secs = seconds_since(t0);
    return {degenerate && identical && coverage >= tol::coverage && secs < tol::bootstrap_seconds,
            "degenerate width " + fmt(flat.high - flat.low) + ", reruns " + (identical ? "identical" : "differ") +
                ", coverage " + fmt(coverage) + ", " + fmt(secs) + " s"};
}

Outcome trend_replay() {
    std::ifstream in(std::string(NORMLENS_FIXTURE_DIR) + "/trend_replay.tsv");
    if (!in) return {false, "fixture missing"};
    struct Row {
        std::string target, metric, direction, model, method, color;
        double in, others, delta;
    };
    std::vector<Row> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#' || line.rfind("target\t", 0) == 0) continue;
        const auto f = util::split(line, '\t');
        if (f.size() != 9) return {false, "bad fixture line: " + line};
        rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[4]), std::string(f[5]),
                        std::string(f[6]), std::string(f[8]), std::stod(std::string(f[2])),
                        std::stod(std::string(f[3])), std::stod(std::string(f[7]))});
    }

    std::vector<stats::BaselinePair> baselines;
    std::vector<adapt::AdaptationResult> results;
    int direction_errors = 0;
    for (const auto& r : rows) {
        const auto metric = stats::parse_metric(r.metric);
        if (!metric) return {false, "unknown metric " + r.metric};
        const auto dir = stats::expected_direction(r.in, r.others);
        if (!dir || stats::to_string(*dir) != r.direction) ++direction_errors;
        const bool known = std::any_of(baselines.begin(), baselines.end(), [&](const auto& b) {
            return b.metric == *metric && b.target.name == r.target;
        });
        if (!known) baselines.push_back({*metric, {r.target}, r.in, r.others, dir});
        adapt::AdaptationResult a;
        a.source_id = "replay";
        a.target = {r.target};
        a.model = r.model;
        a.method = *adapt::parse_method(r.method);
        a.delta[*metric] = r.delta;
        results.push_back(a);
    }
    const auto table = adapt::evaluate_adaptations(results, baselines);

    int agree = 0;
    for (const auto& r : rows) {
        const auto metric = *stats::parse_metric(r.metric);
        const auto it = std::find_if(table.begin(), table.end(), [&](const adapt::DeltaRow& d) {
            return d.target.name == r.target && d.model == r.model && adapt::to_string(d.method) == r.method &&
                   d.metric == metric;
        });
        if (it == table.end()) continue;
        const std::string color = it->verdict == adapt::TrendVerdict::match      ? "green"
                                  : it->verdict == adapt::TrendVerdict::mismatch ? "red"
                                                                                 : "none";
        if (color == r.color) ++agree;
    }
    auto direction_of = [&](const std::string& target) {
        for (const auto& b : baselines)
            if (b.metric == stats::Metric::words && b.target.name == target && b.direction)
                return std::string(stats::to_string(*b.direction));
        return std::string("?");
    };
    const bool flip = direction_of("ml") == "up" && direction_of("nlp") == "down";
    const bool complete = rows.size() == 2 * 13 * 3 * 2;
    return {complete && direction_errors == 0 && agree == static_cast<int>(rows.size()) && flip,
            std::to_string(agree) + "/" + std::to_string(rows.size()) + " colors, " +
                std::to_string(direction_errors) + " direction errors, words ml " + direction_of("ml") + " / nlp " +
                direction_of("nlp")};
}

Outcome judge_prompt() {
    std::ifstream in(std::string(NORMLENS_FIXTURE_DIR) + "/judge_request.json", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string sentence = "Accuracy rose to 91.2% on the “hard” split, up from 84.0%.";
    const bool bytes_equal = chat::to_json(rhetoric::build_judge_request(sentence)).dump() == ss.str();

    stubs::RuleJudgeClient client;
    rhetoric::LlmJudge judge(client);
    const bool pct = judge.judge("50% of the students passed the exam.") == rhetoric::Verdict::yes;
    const bool fig = judge.judge("As shown in Figure 1") == rhetoric::Verdict::no;
    const bool year = judge.judge("The internet was invented in 1969.") == rhetoric::Verdict::no;
    return {bytes_equal && pct && fig && year,
            std::string("payload ") + (bytes_equal ? "byte-equal" : "differs") + ", examples " +
                std::to_string(pct + fig + year) + "/3"};
}

bool stamped_csv(const std::string& body) {
    return body.rfind("# normlens ", 0) == 0 && body.substr(0, body.find('\n')).find("config_hash=") != std::string::npos;
}

bool rectangular_csv(const std::string& body) {
    std::istringstream in(body);
    std::size_t columns = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        const auto n = util::split(line, ',').size();
        if (columns == 0) columns = n;
        if (n != columns) return false;
    }
    return columns > 0;
}

Outcome end_to_end() {
    const auto dir = testsupport::fresh_dir("acceptance");
    const auto t0 = Clock::now();
    const auto steps = testsupport::run_pipeline(dir);
    const double secs = seconds_since(t0);
    for (const auto& s : steps)
        if (s.code != 0) return {false, s.command + " failed: " + s.err};
    if (steps.size() != testsupport::pipeline_commands().size()) return {false, "pipeline incomplete"};

    const auto files = testsupport::directory_contents(dir);
    std::string problems;
    for (const auto& [name, body] : files) {
        if (name.ends_with(".csv") && !(stamped_csv(body) && rectangular_csv(body))) problems += name + " ";
        if (name.ends_with(".jsonl")) {
            std::istringstream in(body);
            for (std::string line; std::getline(in, line);) {
                const auto j = nlohmann::json::parse(line, nullptr, false);
                if (j.is_discarded() || !j.contains("config_hash") || !j.contains("suite_version")) {
                    problems += name + " ";
                    break;
                }
            }
        }
    }

    std::size_t deltas = 0, nonzero = 0;
    std::istringstream results(files.at("adaptation_results.jsonl"));
    for (std::string line; std::getline(results, line);) {
        const auto r = adapt::result_from_json(nlohmann::json::parse(line));
        for (const auto& [m, d] : r.delta) {
            ++deltas;
            if (d != 0.0) ++nonzero;
        }
    }
    const bool pass = problems.empty() && deltas > 0 && nonzero == 0 && secs < tol::pipeline_seconds;
    return {pass, std::to_string(files.size()) + " artifacts" + (problems.empty() ? "" : " (bad: " + problems + ")") +
                      ", " + std::to_string(nonzero) + "/" + std::to_string(deltas) + " nonzero deltas, " +
                      fmt(secs) + " s"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"npmi-oracle-equivalence", npmi_oracle},
        {"planted-jargon-separation", planted_jargon},
        {"table-figure-lexicon", artifact_lexicon},
        {"readability-fixtures", readability},
        {"skew-properties", skew},
        {"bootstrap-ci", bootstrap},
        {"trend-replay", trend_replay},
        {"judge-prompt-bytes", judge_prompt},
        {"end-to-end-offline", end_to_end},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}

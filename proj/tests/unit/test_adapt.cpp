#include <doctest.h>

#include "normlens/adapt.hpp"
#include "normlens/bundled_data.hpp"
#include "normlens/error.hpp"
#include "normlens/pipeline.hpp"
#include "normlens/stubs.hpp"
#include "normlens/util.hpp"

using namespace normlens;
using adapt::SamplingMethod;
using adapt::TrendVerdict;
using stats::Direction;

namespace {

const corpus::Corpus& mini() {
    static const auto c = corpus::parse_corpus(bundled::mini_corpus, corpus::VenueMap::bundled());
    return c;
}

// Keeps the first half of the introduction's words.
class HalvingClient : public chat::ChatClient {
public:
    chat::Reply complete(const chat::Request& r) override {
        const auto intro = *adapt::extract_prompt_introduction(r.messages.at(0).content);
        std::vector<std::string> words;
        for (auto w : util::split(intro, ' '))
            if (!w.empty()) words.emplace_back(w);
        std::string out;
        for (std::size_t i = 0; i < words.size() / 2; ++i) out += (i ? " " : "") + words[i];
        return {out + ".", "stop"};
    }
    std::string identity() const override { return "halving"; }
};

class CountingClient : public chat::ChatClient {
public:
    chat::Reply complete(const chat::Request& r) override {
        last = r;
        return {"  generated " + std::to_string(calls++) + "  ", calls == 2 ? "length" : "stop"};
    }
    std::string identity() const override { return "counting"; }
    int calls = 0;
    chat::Request last;
};

adapt::AdaptationResult run_one(const corpus::Document& doc, chat::ChatClient& gen, int sample = 0) {
    pipeline::MetricContext ctx;
    adapt::GenerationSpec spec{"m", 0.7, 1.0, 64, 1};
    auto g = adapt::adapt_text(doc, "Machine Learning", "Human-Computer Interaction", spec, &gen);
    adapt::AdaptationResult r;
    r.source_id = doc.id;
    r.source = doc.community;
    r.target = {"hci"};
    r.model = "m";
    r.sample_index = sample;
    r.text = g.at(0).text;
    r.before = pipeline::compute_metrics({doc.id, doc.community, doc.intro_text, {}, {}}, ctx).record;
    r.after = pipeline::compute_metrics({doc.id, doc.community, r.text, {}, {}}, ctx).record;
    r.before_config = r.after_config = ctx.fingerprint();
    adapt::compute_deltas(r);
    return r;
}

}  // namespace

TEST_CASE("random sampling is seeded, per community and truncating") {
    const auto& c = mini();
    adapt::SamplingSpec spec{SamplingMethod::random, 3, 11};
    auto a = adapt::sample_sources(c, {"hci"}, spec);
    auto b = adapt::sample_sources(c, {"hci"}, spec);
    CHECK(adapt::to_json(a) == adapt::to_json(b));
    CHECK(a.sources.size() == 6);
    CHECK(a.truncated.empty());
    for (const auto& s : a.sources) CHECK(s.community.name != "hci");

    spec.seed = 12;
    CHECK(adapt::to_json(adapt::sample_sources(c, {"hci"}, spec)) != adapt::to_json(a));

    spec.count = 100;
    auto all = adapt::sample_sources(c, {"hci"}, spec);
    CHECK(all.sources.size() == 20);
    CHECK(all.truncated.size() == 2);

    CHECK(adapt::sample_set_from_json(adapt::to_json(a)).sources.size() == 6);
    CHECK_THROWS_AS(adapt::sample_sources(c, {"bio"}, spec), Error);
    spec.count = 0;
    CHECK_THROWS_AS(adapt::sample_sources(c, {"hci"}, spec), Error);
}

TEST_CASE("specific sampling picks the most target-specific documents") {
    const auto& c = mini();
    const auto table = specificity::build_npmi_table(c);
    adapt::SamplingSpec spec{SamplingMethod::specific, 2, 0};
    auto top = adapt::sample_sources(c, {"nlp"}, spec, &table);
    REQUIRE(top.sources.size() == 4);

    spec.count = 100;
    auto all = adapt::sample_sources(c, {"nlp"}, spec, &table);
    for (const auto& chosen : top.sources)
        for (const auto& other : all.sources)
            if (other.community == chosen.community) {
                const bool picked = std::any_of(top.sources.begin(), top.sources.end(),
                                                [&](const auto& s) { return s.doc_id == other.doc_id; });
                if (!picked) CHECK(*chosen.specificity >= *other.specificity);
            }

    CHECK_THROWS_AS(adapt::sample_sources(c, {"nlp"}, spec, nullptr), Error);
}

TEST_CASE("adaptation prompt rendering") {
    const auto p = adapt::render_adaptation_prompt("ML", "HCI", "Body {target} text.");
    CHECK(p.find("{source}") == std::string::npos);
    CHECK(p.find("HCI") != std::string::npos);
    CHECK(adapt::extract_prompt_introduction(p) == std::string("Body {target} text."));
    CHECK(!adapt::extract_prompt_introduction("no markers").has_value());
}

TEST_CASE("generation requests and replies") {
    CountingClient client;
    corpus::Document doc;
    doc.id = "d";
    doc.intro_text = "We study things.";
    adapt::GenerationSpec spec{"model-x", 0.7, 0.9, 128, 3};
    auto gens = adapt::adapt_text(doc, "A", "B", spec, &client);
    REQUIRE(gens.size() == 3);
    CHECK(gens[0].text == "generated 0");
    CHECK(gens[1].truncated);
    CHECK_FALSE(gens[0].truncated);
    CHECK(gens[0].prompt_hash == gens[2].prompt_hash);
    CHECK(gens[0].prompt_version == adapt::kPromptVersion);
    CHECK(client.last.model == "model-x");
    CHECK(client.last.temperature == 0.7);
    CHECK(client.last.max_tokens == 128);
    CHECK_THROWS_AS(adapt::adapt_text(doc, "A", "B", spec, nullptr), Error);
}

TEST_CASE("identity rewrite gives zero deltas") {
    stubs::EchoClient echo;
    for (const auto& doc : mini().documents) {
        if (doc.community.name != "ml") continue;
        auto r = run_one(doc, echo);
        CHECK(r.text == doc.intro_text);
        REQUIRE_FALSE(r.delta.empty());
        for (const auto& [m, d] : r.delta) CHECK(d == 0.0);
    }
}

TEST_CASE("shortening rewrite lowers word count") {
    HalvingClient half;
    const auto& doc = mini().documents.front();
    auto r = run_one(doc, half);
    CHECK(r.delta.at(stats::Metric::words) < 0);

    std::vector<adapt::AdaptationResult> results{r, run_one(mini().documents[1], half, 0)};
    std::vector<stats::BaselinePair> baselines{{stats::Metric::words, {"hci"}, 10.0, 20.0, Direction::down}};
    auto rows = adapt::evaluate_adaptations(results, baselines);
    auto it = std::find_if(rows.begin(), rows.end(), [](const auto& row) { return row.metric == stats::Metric::words; });
    REQUIRE(it != rows.end());
    CHECK(it->n == 2);
    CHECK(it->verdict == TrendVerdict::match);
    CHECK(it->mean_delta ==
          doctest::Approx((results[0].delta.at(stats::Metric::words) + results[1].delta.at(stats::Metric::words)) / 2));

    results[1].after_config = "other";
    try {
        adapt::evaluate_adaptations(results, baselines);
        FAIL("expected config_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config_mismatch);
    }
}

TEST_CASE("ten results for two documents and five samples") {
    stubs::EchoClient echo;
    adapt::GenerationSpec spec{"m", 0.7, 1.0, 64, 5};
    std::set<std::string> keys;
    for (int d = 0; d < 2; ++d) {
        const auto& doc = mini().documents[static_cast<std::size_t>(d)];
        for (const auto& g : adapt::adapt_text(doc, "ML", "HCI", spec, &echo)) {
            adapt::AdaptationResult r;
            r.source_id = doc.id;
            r.target = {"hci"};
            r.model = "m";
            r.sample_index = g.sample_index;
            keys.insert(r.key());
        }
    }
    CHECK(keys.size() == 10);
}

TEST_CASE("trend verdicts") {
    CHECK(adapt::trend_verdict(1.0, Direction::up) == TrendVerdict::match);
    CHECK(adapt::trend_verdict(-1.0, Direction::down) == TrendVerdict::match);
    CHECK(adapt::trend_verdict(-1.0, Direction::up) == TrendVerdict::mismatch);
    CHECK(adapt::trend_verdict(1.0, Direction::down) == TrendVerdict::mismatch);
    CHECK(adapt::trend_verdict(0.0, Direction::up) == TrendVerdict::no_change);
    CHECK(adapt::trend_verdict(2.0, std::nullopt) == TrendVerdict::undefined);
    for (double d : {-3.0, -0.5, 0.25, 7.0}) {
        const auto a = adapt::trend_verdict(d, Direction::up);
        const auto b = adapt::trend_verdict(-d, Direction::down);
        CHECK(a == b);
    }
}

TEST_CASE("adaptation result JSON round trip") {
    stubs::EchoClient echo;
    auto r = run_one(mini().documents.front(), echo);
    auto back = adapt::result_from_json(adapt::to_json(r));
    CHECK(adapt::to_json(back) == adapt::to_json(r));
    CHECK(back.key() == r.key());
}

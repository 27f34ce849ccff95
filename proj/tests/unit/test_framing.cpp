#include <doctest.h>

#include <cmath>

#include "normlens/error.hpp"
#include "normlens/framing.hpp"

using namespace normlens;
using framing::Value;

namespace {

framing::ValueLexicon small_lexicon() {
    return framing::ValueLexicon::parse(
        "# test lexicon\n"
        "performance\taccuracy\n"
        "performance\terror rate\n"
        "novelty\tnovel\n"
        "efficiency\tfast\n"
        "fairness\tbias\n");
}

std::size_t idx(Value v) { return static_cast<std::size_t>(v); }

}  // namespace

TEST_CASE("lexicon parsing") {
    auto lex = small_lexicon();
    CHECK(lex.size() == 5);
    CHECK(lex.phrases(Value::performance).size() == 2);
    CHECK(lex.phrases(Value::performance)[1] == std::vector<std::string>{"error", "rate"});
    CHECK_THROWS_AS(framing::ValueLexicon::parse("elegance\tbeauty\n"), Error);
    CHECK_THROWS_AS(framing::ValueLexicon::parse("novelty\n"), Error);
    lex.add(Value::novelty, "Novel");
    CHECK(lex.size() == 5);
    CHECK(framing::ValueLexicon::bundled().size() > 50);
    for (auto v : framing::kAllValues) CHECK_FALSE(framing::ValueLexicon::bundled().phrases(v).empty());
}

TEST_CASE("value detection on word boundaries") {
    auto lex = small_lexicon();
    CHECK(framing::detect_values("Accuracy improves.", lex) == framing::ValueSet{Value::performance});
    CHECK(framing::detect_values("The error rate drops and it is fast.", lex) ==
          framing::ValueSet{Value::performance, Value::efficiency});
    CHECK(framing::detect_values("An error in the rate.", lex).empty());
    CHECK(framing::detect_values("Breakfast is served.", lex).empty());
    CHECK(framing::detect_values("Inaccuracy abounds.", lex).empty());
    CHECK(framing::detect_values("A novel, fast, unbiased method without bias.", lex) ==
          framing::ValueSet{Value::novelty, Value::efficiency, Value::fairness});
}

TEST_CASE("value vector is the per-value sentence fraction") {
    auto lex = small_lexicon();
    auto doc = text::prepare("Accuracy matters. Accuracy is fast. Nothing here. A novel idea.");
    auto v = framing::value_vector(doc, lex);
    CHECK(v[idx(Value::performance)] == 0.5);
    CHECK(v[idx(Value::efficiency)] == 0.25);
    CHECK(v[idx(Value::novelty)] == 0.25);
    CHECK(v[idx(Value::fairness)] == 0.0);
    CHECK_THROWS_AS(framing::value_vector(text::prepare(""), lex), Error);

    // Adding a sentence without values never raises a component.
    auto longer = text::prepare("Accuracy matters. Accuracy is fast. Nothing here. A novel idea. Plain words.");
    auto w = framing::value_vector(longer, lex);
    for (std::size_t i = 0; i < framing::kValueCount; ++i) CHECK(w[i] <= v[i]);
}

TEST_CASE("cosine similarity") {
    framing::ValueVector a{}, b{}, zero{};
    a[0] = 1.0;
    a[1] = 1.0;
    b[0] = 2.0;
    b[1] = 2.0;
    CHECK(framing::framing_similarity(a, b) == doctest::Approx(1.0));
    CHECK(framing::framing_similarity(a, a) <= 1.0);
    framing::ValueVector c{};
    c[2] = 0.3;
    CHECK(framing::framing_similarity(a, c) == 0.0);
    CHECK(framing::framing_similarity(a, zero) == 0.0);
    CHECK(framing::framing_similarity(zero, zero) == 0.0);
    framing::ValueVector d{};
    d[0] = 1.0;
    CHECK(framing::framing_similarity(a, d) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(framing::framing_similarity(a, d) == framing::framing_similarity(d, a));

    std::vector<framing::ValueVector> vs{a, d};
    auto m = framing::mean_vector(vs);
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 0.5);
    CHECK(framing::mean_vector(std::span<const framing::ValueVector>{}) == zero);
}

TEST_CASE("lexicon precision against labeled sentences") {
    auto lex = small_lexicon();
    using S = framing::ValueSet;
    const std::vector<framing::LabeledSentence> labeled{
        {"Accuracy is high.", S{Value::performance}},
        {"Our accuracy beats the baseline.", S{Value::performance}},
        {"The error rate is low.", S{Value::performance}},
        {"We report accuracy for completeness.", S{}},
        {"Accuracy and speed both matter.", S{Value::performance, Value::efficiency}},
        {"A novel approach.", S{Value::novelty}},
        {"This is a novel in the literary sense.", S{}},
        {"Novel results follow.", S{Value::novelty}},
        {"It is fast.", S{Value::efficiency}},
        {"Fast food was consumed.", S{}},
        {"Fast training.", S{Value::efficiency}},
        {"Inference is fast and accurate.", S{Value::efficiency, Value::performance}},
        {"We measure bias.", S{Value::fairness}},
        {"Bias terms are initialized to zero.", S{}},
        {"Gender bias is reduced.", S{Value::fairness}},
        {"We do not discuss values.", S{}},
        {"Results are shown below.", S{Value::performance}},
        {"This is cheap.", S{Value::efficiency}},
        {"The method is new.", S{Value::novelty}},
        {"Bias in hiring persists.", S{Value::fairness}},
    };
    auto p = framing::lexicon_precision(lex, labeled);
    CHECK(p.size() == framing::kValueCount);
    // Hand counts: performance predicted in rows 1-5 (4 correct);
    // novelty rows 6-8 (2); efficiency rows 9-12 (3); fairness rows 13-15, 20 (3).
    CHECK(p[Value::performance].predicted == 5);
    CHECK(p[Value::performance].true_positives == 4);
    CHECK(*p[Value::performance].precision == doctest::Approx(0.8));
    CHECK(p[Value::novelty].predicted == 3);
    CHECK(p[Value::novelty].true_positives == 2);
    CHECK(p[Value::efficiency].predicted == 4);
    CHECK(p[Value::efficiency].true_positives == 3);
    CHECK(p[Value::fairness].predicted == 4);
    CHECK(p[Value::fairness].true_positives == 3);
    CHECK_FALSE(p[Value::society].precision.has_value());
    CHECK(p[Value::society].predicted == 0);
}

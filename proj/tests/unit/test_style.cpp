#include <doctest.h>

#include "../support/oracles.hpp"
#include "normlens/error.hpp"
#include "normlens/stubs.hpp"
#include "normlens/style.hpp"

using namespace normlens;

namespace {

class LengthParityScorer : public style::SentenceScorer {
public:
    std::vector<double> score(std::span<const std::string> s) override {
        std::vector<double> out;
        for (const auto& x : s) out.push_back(static_cast<double>(x.size() % 2));
        return out;
    }
    std::string identity() const override { return "parity"; }
};

class FailingScorer : public style::SentenceScorer {
public:
    std::vector<double> score(std::span<const std::string>) override {
        throw Error(ErrorCode::backend_unavailable, "down");
    }
    std::string identity() const override { return "down"; }
};

class OutOfRangeScorer : public style::SentenceScorer {
public:
    std::vector<double> score(std::span<const std::string> s) override { return std::vector<double>(s.size(), 1.5); }
    std::string identity() const override { return "bad"; }
};

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::io_error;
}

}  // namespace

TEST_CASE("syllable heuristic") {
    CHECK(style::count_syllables("cat") == 1);
    CHECK(style::count_syllables("the") == 1);
    CHECK(style::count_syllables("make") == 1);
    CHECK(style::count_syllables("table") == 2);
    CHECK(style::count_syllables("readability") == 5);
    CHECK(style::count_syllables("rhythm") == 1);
    CHECK(style::count_syllables("queue") == 1);
    CHECK(style::count_syllables("42") == 1);
    CHECK(style::count_syllables("") == 1);
}

TEST_CASE("Flesch reading ease on hand-evaluated sentences") {
    std::vector<std::string> three{"the", "cat", "sat"};
    CHECK(style::flesch_reading_ease(three) == doctest::Approx(119.19).epsilon(1e-12));
    std::vector<std::string> six{"the", "cat", "sat", "on", "the", "mat"};
    CHECK(style::flesch_reading_ease(six) == doctest::Approx(116.145).epsilon(1e-12));
    std::vector<std::string> longer{"the", "elephant", "sat", "on", "the", "mat"};
    CHECK(style::flesch_reading_ease(longer) < style::flesch_reading_ease(six));
    CHECK(code_of([] { style::flesch_reading_ease(std::vector<std::string>{}); }) == ErrorCode::empty_sentence);
}

TEST_CASE("readability is the per-sentence mean") {
    auto one = text::prepare("The cat sat.");
    CHECK(style::readability(one) == doctest::Approx(119.19));
    auto two = text::prepare("The cat sat. The cat sat on the mat.");
    CHECK(style::readability(two) == doctest::Approx((119.19 + 116.145) / 2));
    auto doc = text::prepare("Readability varies. Short one. Considerably elaborate constructions appear.");
    double lo = 1e9, hi = -1e9;
    for (const auto& ws : doc.words_per_sentence) {
        const double v = style::flesch_reading_ease(ws);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double r = style::readability(doc);
    CHECK(r >= lo);
    CHECK(r <= hi);
    CHECK(code_of([] { style::readability(text::prepare("")); }) == ErrorCode::empty_document);
}

TEST_CASE("formality through the scorer port") {
    auto doc = text::prepare("Hello there. Hi. Good morning to you. Ok.");
    stubs::ConstantScorer half(0.5);
    CHECK(style::formality(doc, &half) == 0.5);

    // Sentence lengths 12, 3, 20, 3: parity 0, 1, 0, 1.
    LengthParityScorer parity;
    CHECK(style::formality(doc, &parity) == doctest::Approx(0.5));

    FailingScorer down;
    CHECK(code_of([&] { style::formality(doc, &down); }) == ErrorCode::scorer_unavailable);
    CHECK(code_of([&] { style::formality(doc, nullptr); }) == ErrorCode::scorer_unavailable);
    OutOfRangeScorer bad;
    CHECK(code_of([&] { style::formality(doc, &bad); }) == ErrorCode::scorer_unavailable);
    CHECK(code_of([&] { style::formality(text::prepare(""), &half); }) == ErrorCode::empty_document);
}

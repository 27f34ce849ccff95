#include "normlens/framing.hpp"

#include <algorithm>
#include <cmath>

#include "normlens/bundled_data.hpp"
#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::framing {

std::string_view to_string(Value value) {
    switch (value) {
        case Value::performance: return "performance";
        case Value::novelty: return "novelty";
        case Value::efficiency: return "efficiency";
        case Value::generalizability: return "generalizability";
        case Value::understanding: return "understanding";
        case Value::simplicity: return "simplicity";
        case Value::fairness: return "fairness";
        case Value::society: return "society";
        case Value::openness: return "openness";
        case Value::usability: return "usability";
    }
    return "performance";
}

std::optional<Value> parse_value(std::string_view name) {
    const auto lower = util::to_lower(util::trim(name));
    for (auto v : kAllValues)
        if (to_string(v) == lower) return v;
    return std::nullopt;
}

ValueLexicon ValueLexicon::parse(std::string_view text) {
    ValueLexicon lex;
    for (const auto& line : util::config_lines(text)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(ErrorCode::malformed_input, "value lexicon: expected value<TAB>phrase in '" + line + "'");
        const auto name = std::string_view(line).substr(0, tab);
        const auto value = parse_value(name);
        if (!value)
            throw Error(ErrorCode::malformed_input,
                        "value lexicon: unknown value '" + std::string(util::trim(name)) + "'");
        lex.add(*value, std::string_view(line).substr(tab + 1));
    }
    return lex;
}

ValueLexicon ValueLexicon::load(const std::string& path) { return parse(util::read_file(path)); }

const ValueLexicon& ValueLexicon::bundled() {
    static const ValueLexicon lex = parse(bundled::value_lexicon);
    return lex;
}

void ValueLexicon::add(Value value, std::string_view phrase) {
    auto tokens = text::tokenize(phrase);
    if (tokens.empty())
        throw Error(ErrorCode::malformed_input, "value phrase has no tokens: '" + std::string(phrase) + "'");
    auto& list = phrases_[static_cast<std::size_t>(value)];
    if (std::find(list.begin(), list.end(), tokens) == list.end()) list.push_back(std::move(tokens));
}

const std::vector<std::vector<std::string>>& ValueLexicon::phrases(Value value) const {
    return phrases_[static_cast<std::size_t>(value)];
}

std::size_t ValueLexicon::size() const {
    std::size_t n = 0;
    for (const auto& p : phrases_) n += p.size();
    return n;
}

namespace {

bool contains_sequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

ValueSet detect_values(std::string_view sentence, const ValueLexicon& lexicon) {
    const auto tokens = text::tokenize(sentence);
    ValueSet out;
    for (auto v : kAllValues)
        for (const auto& phrase : lexicon.phrases(v))
            if (contains_sequence(tokens, phrase)) {
                out.insert(v);
                break;
            }
    return out;
}

ValueVector value_vector(const text::PreparedText& doc, const ValueLexicon& lexicon) {
    if (doc.sentences.empty()) throw Error(ErrorCode::empty_document, "document has no sentences");
    ValueVector v{};
    for (const auto& s : doc.sentences)
        for (auto value : detect_values(s, lexicon)) v[static_cast<std::size_t>(value)] += 1.0;
    for (double& x : v) x /= static_cast<double>(doc.sentences.size());
    return v;
}

double framing_similarity(const ValueVector& a, const ValueVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < kValueCount; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

ValueVector mean_vector(std::span<const ValueVector> vectors) {
    ValueVector out{};
    if (vectors.empty()) return out;
    for (const auto& v : vectors)
        for (std::size_t i = 0; i < kValueCount; ++i) out[i] += v[i];
    for (double& x : out) x /= static_cast<double>(vectors.size());
    return out;
}

std::map<Value, ValuePrecision> lexicon_precision(const ValueLexicon& lexicon,
                                                  std::span<const LabeledSentence> labeled) {
    std::map<Value, ValuePrecision> out;
    for (auto v : kAllValues) out[v];
    for (const auto& item : labeled)
        for (auto v : detect_values(item.sentence, lexicon)) {
            auto& p = out[v];
            ++p.predicted;
            if (item.gold.count(v)) ++p.true_positives;
        }
    for (auto& [v, p] : out)
        if (p.predicted > 0)
            p.precision = static_cast<double>(p.true_positives) / static_cast<double>(p.predicted);
    return out;
}

}  // namespace normlens::framing

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normlens/textprep.hpp"

namespace normlens::framing {

enum class Value {
    performance,
    novelty,
    efficiency,
    generalizability,
    understanding,
    simplicity,
    fairness,
    society,
    openness,
    usability,
};

inline constexpr std::size_t kValueCount = 10;

/// Canonical component order of a ValueVector.
inline constexpr std::array<Value, kValueCount> kAllValues = {
    Value::performance,   Value::novelty,    Value::efficiency, Value::generalizability,
    Value::understanding, Value::simplicity, Value::fairness,   Value::society,
    Value::openness,      Value::usability};

std::string_view to_string(Value value);
std::optional<Value> parse_value(std::string_view name);

using ValueSet = std::set<Value>;
using ValueVector = std::array<double, kValueCount>;

class ValueLexicon {
public:
    ValueLexicon() = default;

    /// Lines of `value<TAB>phrase`. Unknown value names are rejected.
    static ValueLexicon parse(std::string_view text);
    static ValueLexicon load(const std::string& path);
    static const ValueLexicon& bundled();

    void add(Value value, std::string_view phrase);

    /// Phrases as token sequences, per value.
    const std::vector<std::vector<std::string>>& phrases(Value value) const;
    std::size_t size() const;

private:
    std::array<std::vector<std::vector<std::string>>, kValueCount> phrases_;
};

/// Values whose phrases occur in the sentence on word boundaries.
ValueSet detect_values(std::string_view sentence, const ValueLexicon& lexicon);

/// Fraction of sentences encoding each value. Throws empty_document.
ValueVector value_vector(const text::PreparedText& doc, const ValueLexicon& lexicon);

/// Cosine similarity; 0 when either vector is all zero.
double framing_similarity(const ValueVector& a, const ValueVector& b);

/// Component-wise mean of a set of vectors (zero vector for an empty set).
ValueVector mean_vector(std::span<const ValueVector> vectors);

struct LabeledSentence {
    std::string sentence;
    ValueSet gold;
};

struct ValuePrecision {
    std::size_t true_positives = 0;
    std::size_t predicted = 0;
    /// Absent when the value was never predicted.
    std::optional<double> precision;
};

std::map<Value, ValuePrecision> lexicon_precision(const ValueLexicon& lexicon,
                                                  std::span<const LabeledSentence> labeled);

}  // namespace normlens::framing

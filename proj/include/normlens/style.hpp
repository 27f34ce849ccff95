#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normlens/textprep.hpp"

namespace normlens::style {

/// Sentence -> score in [0,1]. Implementations must be deterministic and
/// return one score per input sentence, in order.
class SentenceScorer {
public:
    virtual ~SentenceScorer() = default;
    virtual std::vector<double> score(std::span<const std::string> sentences) = 0;
    /// Stable identifier of the backend; part of the metric configuration.
    virtual std::string identity() const = 0;
};

/// Vowel groups (a, e, i, o, u, y), minus a terminal silent "e" unless the
/// word ends in "le", floored at one.
int count_syllables(std::string_view word);

/// 206.835 - 1.015 * words - 84.6 * syllables / words, for a single sentence.
double flesch_reading_ease(std::span<const std::string> words);

/// Mean per-sentence Flesch reading ease. Throws empty_document.
double readability(const text::PreparedText& doc);

/// Mean scorer output over sentences. Throws scorer_unavailable when `scorer`
/// is null or the backend fails, and empty_document for zero sentences.
double formality(const text::PreparedText& doc, SentenceScorer* scorer);

}  // namespace normlens::style

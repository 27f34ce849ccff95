#include "normlens/style.hpp"

#include <cctype>

#include "normlens/error.hpp"

namespace normlens::style {

namespace {

bool is_vowel(char c) {
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
        default: return false;
    }
}

}  // namespace

int count_syllables(std::string_view word) {
    std::string w;
    w.reserve(word.size());
    for (char c : word)
        if (std::isalpha(static_cast<unsigned char>(c)))
            w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

    int groups = 0;
    bool in_group = false;
    for (char c : w) {
        const bool v = is_vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    if (w.size() >= 2 && w.back() == 'e' && !w.ends_with("le")) --groups;
    return groups < 1 ? 1 : groups;
}

double flesch_reading_ease(std::span<const std::string> words) {
    if (words.empty()) throw Error(ErrorCode::empty_sentence, "sentence has no words");
    double syllables = 0.0;
    for (const auto& w : words) syllables += count_syllables(w);
    const double n = static_cast<double>(words.size());
    return 206.835 - 1.015 * n - 84.6 * (syllables / n);
}

double readability(const text::PreparedText& doc) {
    if (doc.words_per_sentence.empty())
        throw Error(ErrorCode::empty_document, "document has no sentences");
    double sum = 0.0;
    for (const auto& s : doc.words_per_sentence) sum += flesch_reading_ease(s);
    return sum / static_cast<double>(doc.words_per_sentence.size());
}

double formality(const text::PreparedText& doc, SentenceScorer* scorer) {
    if (scorer == nullptr)
        throw Error(ErrorCode::scorer_unavailable, "no formality scorer configured");
    if (doc.sentences.empty()) throw Error(ErrorCode::empty_document, "document has no sentences");

    std::vector<double> scores;
    try {
        scores = scorer->score(doc.sentences);
    } catch (const Error& e) {
        throw Error(ErrorCode::scorer_unavailable, std::string("formality backend: ") + e.what());
    }
    if (scores.size() != doc.sentences.size())
        throw Error(ErrorCode::scorer_unavailable, "formality backend returned " +
                                                       std::to_string(scores.size()) + " scores for " +
                                                       std::to_string(doc.sentences.size()) +
                                                       " sentences");
    double sum = 0.0;
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0))
            throw Error(ErrorCode::scorer_unavailable, "formality score outside [0,1]");
        sum += s;
    }
    return sum / static_cast<double>(scores.size());
}

}  // namespace normlens::style

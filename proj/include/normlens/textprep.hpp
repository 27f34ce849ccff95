#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace normlens::text {

/// Lower-cased abbreviations (with their trailing period) that never close a
/// sentence, e.g. "et al." or "fig.".
class AbbreviationList {
public:
    AbbreviationList() = default;
    explicit AbbreviationList(std::vector<std::string> entries);

    static AbbreviationList parse(std::string_view text);
    static AbbreviationList load(const std::string& path);
    static const AbbreviationList& bundled();

    void add(std::string entry);
    /// True when `prefix` (text up to and including a period) ends with a
    /// listed abbreviation that starts on a word boundary.
    bool guards(std::string_view prefix) const;

    const std::vector<std::string>& entries() const { return entries_; }

private:
    std::vector<std::string> entries_;
};

struct PreparedText {
    /// Sentences with URLs removed and whitespace collapsed; original casing
    /// and punctuation are kept for consumers that need them.
    std::vector<std::string> sentences;
    std::vector<std::vector<std::string>> words_per_sentence;
    std::size_t word_count = 0;
    std::size_t sentence_count = 0;

    bool operator==(const PreparedText&) const = default;
};

/// Removes scheme-prefixed (`https://...`) and `www.`-prefixed spans.
std::string strip_urls(std::string_view text);

/// Splits on terminal punctuation unless an abbreviation guards the period.
std::vector<std::string> split_sentences(std::string_view text,
                                         const AbbreviationList& abbreviations);

/// Lower-cases and splits on anything outside [a-z0-9'-]. Leading and trailing
/// hyphens/apostrophes are trimmed and tokens without a letter or digit are
/// dropped.
std::vector<std::string> tokenize(std::string_view sentence);

/// Fixed pipeline: strip URLs, segment, lower-case, strip special characters,
/// tokenize. Sentences that yield no tokens are dropped.
PreparedText prepare(std::string_view text,
                     const AbbreviationList& abbreviations = AbbreviationList::bundled());

}  // namespace normlens::text

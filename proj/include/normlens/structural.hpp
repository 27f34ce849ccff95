#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "normlens/textprep.hpp"

namespace normlens::structural {

struct ArtifactLexicon {
    std::set<std::string> table_terms;
    std::set<std::string> figure_terms;

    /// Lines of `category<TAB>term`, category one of "table" or "figure".
    static ArtifactLexicon parse(std::string_view text);
    static ArtifactLexicon load(const std::string& path);
    static const ArtifactLexicon& bundled();
};

struct StructuralMetrics {
    std::size_t word_count = 0;
    std::size_t sentence_count = 0;
    bool has_table = false;
    bool has_figure = false;

    bool operator==(const StructuralMetrics&) const = default;
};

/// Candidate lexicon surfaces for one sentence: lower-cased runs of letters
/// and periods, so "Fig.2," yields "fig." and "stable" never yields "tab".
std::set<std::string> mention_candidates(std::string_view sentence);

bool mentions_any(std::string_view sentence, const std::set<std::string>& terms);

StructuralMetrics structural_metrics(const text::PreparedText& doc,
                                     const ArtifactLexicon& lexicon = ArtifactLexicon::bundled());

}  // namespace normlens::structural

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "normlens/corpus.hpp"
#include "normlens/framing.hpp"
#include "normlens/rhetoric.hpp"
#include "normlens/specificity.hpp"
#include "normlens/stats.hpp"
#include "normlens/structural.hpp"
#include "normlens/style.hpp"
#include "normlens/textprep.hpp"

namespace normlens::pipeline {

/// Everything that determines a MetricRecord. Ports left null make their
/// metrics absent; they are never zero-filled.
struct MetricContext {
    const text::AbbreviationList* abbreviations = &text::AbbreviationList::bundled();
    const structural::ArtifactLexicon* artifacts = &structural::ArtifactLexicon::bundled();
    const framing::ValueLexicon* values = &framing::ValueLexicon::bundled();
    const specificity::NpmiTable* npmi = nullptr;
    style::SentenceScorer* formality = nullptr;
    rhetoric::Judge* judge = nullptr;
    rhetoric::NarrativeClassifier* narrative = nullptr;

    /// Hash over lexicons, NPMI table and port identities. Two records are
    /// comparable only when computed under the same fingerprint.
    std::string fingerprint() const;
};

struct MetricInput {
    std::string doc_id;
    corpus::CommunityId community;
    std::string_view text;
    /// Community for the specificity score; defaults to `community`.
    std::optional<corpus::CommunityId> specificity_target;
    /// When set, framing_similarity is the similarity to this centroid.
    std::optional<framing::ValueVector> framing_centroid;
};

struct MetricOutcome {
    stats::MetricRecord record;
    std::vector<std::string> warnings;
};

MetricOutcome compute_metrics(const MetricInput& input, const MetricContext& context);

}  // namespace normlens::pipeline

#include "normlens/pipeline.hpp"

#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::pipeline {

std::string MetricContext::fingerprint() const {
    std::string key = "metrics-v1\n";
    auto line = [&](std::string_view name, std::string_view value) {
        key += name;
        key += '=';
        key += value;
        key += '\n';
    };
    for (const auto& a : abbreviations->entries()) line("abbrev", a);
    for (const auto& t : artifacts->table_terms) line("table", t);
    for (const auto& t : artifacts->figure_terms) line("figure", t);
    for (auto v : framing::kAllValues)
        for (const auto& phrase : values->phrases(v)) {
            std::string joined;
            for (const auto& tok : phrase) {
                if (!joined.empty()) joined += ' ';
                joined += tok;
            }
            line(framing::to_string(v), joined);
        }
    line("npmi", npmi ? npmi->fingerprint() : "none");
    line("formality", formality ? formality->identity() : "none");
    line("judge", judge ? judge->identity() : "none");
    line("narrative", narrative ? narrative->identity() : "none");
    return util::hex64(util::fnv1a(key));
}

MetricOutcome compute_metrics(const MetricInput& input, const MetricContext& context) {
    MetricOutcome out;
    auto& r = out.record;
    r.doc_id = input.doc_id;
    r.community = input.community;

    const auto doc = text::prepare(input.text, *context.abbreviations);
    if (doc.sentence_count == 0)
        throw Error(ErrorCode::empty_document, "document " + input.doc_id + " has no sentences");

    const auto s = structural::structural_metrics(doc, *context.artifacts);
    r.word_count = static_cast<std::int64_t>(s.word_count);
    r.sentence_count = static_cast<std::int64_t>(s.sentence_count);
    r.has_table = s.has_table;
    r.has_figure = s.has_figure;

    r.readability = style::readability(doc);

    if (context.npmi) {
        const auto target = input.specificity_target.value_or(input.community);
        if (context.npmi->community_index(target)) {
            r.specificity = specificity::specificity(doc, target, *context.npmi).value;
            r.specificity_target = target.name;
        } else {
            out.warnings.push_back(input.doc_id + ": community '" + target.name +
                                   "' not in NPMI table; specificity omitted");
        }
    }

    if (context.formality) {
        try {
            r.formality = style::formality(doc, context.formality);
        } catch (const Error& e) {
            out.warnings.push_back(input.doc_id + ": formality omitted: " + e.what());
        }
    }

    if (context.judge) {
        try {
            const auto q = rhetoric::quant_evidence_rate(doc, context.judge);
            r.quant_evidence = q.rate;
            r.unjudged_sentences = q.unjudged;
            if (q.partial())
                out.warnings.push_back(input.doc_id + ": " + std::to_string(q.unjudged) +
                                       " sentence(s) unjudged");
        } catch (const Error& e) {
            out.warnings.push_back(input.doc_id + ": quant_evidence omitted: " + e.what());
        }
    }

    if (context.narrative) {
        try {
            auto labels = rhetoric::classify_narrative(doc, context.narrative);
            r.skews = rhetoric::category_skews(rhetoric::narrative_positions(labels));
            r.narrative_labels = std::move(labels);
        } catch (const Error& e) {
            out.warnings.push_back(input.doc_id + ": narrative skews omitted: " + e.what());
        }
    }

    r.values = framing::value_vector(doc, *context.values);
    if (input.framing_centroid)
        r.framing_similarity = framing::framing_similarity(r.values, *input.framing_centroid);
    return out;
}

}  // namespace normlens::pipeline

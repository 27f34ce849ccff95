#include "normlens/structural.hpp"

#include <cctype>

#include "normlens/bundled_data.hpp"
#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::structural {

ArtifactLexicon ArtifactLexicon::parse(std::string_view text) {
    ArtifactLexicon lex;
    for (const auto& line : util::config_lines(text)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(ErrorCode::malformed_input, "artifact lexicon: expected category<TAB>term");
        auto category = util::to_lower(util::trim(std::string_view(line).substr(0, tab)));
        auto term = util::to_lower(util::trim(std::string_view(line).substr(tab + 1)));
        if (term.empty()) continue;
        if (category == "table") lex.table_terms.insert(term);
        else if (category == "figure") lex.figure_terms.insert(term);
        else throw Error(ErrorCode::malformed_input, "artifact lexicon: unknown category " + category);
    }
    return lex;
}

ArtifactLexicon ArtifactLexicon::load(const std::string& path) {
    return parse(util::read_file(path));
}

const ArtifactLexicon& ArtifactLexicon::bundled() {
    static const ArtifactLexicon lex = parse(bundled::artifact_lexicon);
    return lex;
}

std::set<std::string> mention_candidates(std::string_view sentence) {
    std::set<std::string> out;
    std::string run;
    auto flush = [&] {
        if (run.empty()) return;
        out.insert(run);
        auto b = run.find_first_not_of('.');
        auto e = run.find_last_not_of('.');
        if (b != std::string::npos) out.insert(run.substr(b, e - b + 1));
        run.clear();
    };
    for (char raw : sentence) {
        const auto u = static_cast<unsigned char>(raw);
        if (u < 0x80 && (std::isalpha(u) || raw == '.')) {
            run.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

bool mentions_any(std::string_view sentence, const std::set<std::string>& terms) {
    for (const auto& candidate : mention_candidates(sentence))
        if (terms.contains(candidate)) return true;
    return false;
}

StructuralMetrics structural_metrics(const text::PreparedText& doc, const ArtifactLexicon& lexicon) {
    StructuralMetrics m;
    m.word_count = doc.word_count;
    m.sentence_count = doc.sentence_count;
    for (const auto& sentence : doc.sentences) {
        if (!m.has_table && mentions_any(sentence, lexicon.table_terms)) m.has_table = true;
        if (!m.has_figure && mentions_any(sentence, lexicon.figure_terms)) m.has_figure = true;
        if (m.has_table && m.has_figure) break;
    }
    return m;
}

}  // namespace normlens::structural

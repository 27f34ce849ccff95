#include <doctest.h>

#include "normlens/structural.hpp"

using namespace normlens;

namespace {
structural::StructuralMetrics measure(std::string_view t) {
    return structural::structural_metrics(text::prepare(t));
}
}  // namespace

TEST_CASE("bundled artifact lexicon is the fixed thirteen-term list") {
    const auto& lex = structural::ArtifactLexicon::bundled();
    CHECK(lex.table_terms == std::set<std::string>{"table", "tab", "tab.", "tabs", "tabs.", "tables"});
    CHECK(lex.figure_terms ==
          std::set<std::string>{"figure", "fig", "fig.", "figs", "figs.", "figures", "figure."});
}

TEST_CASE("table and figure detection") {
    auto m = measure("As shown in Fig. 2, loss drops.");
    CHECK(m.has_figure);
    CHECK_FALSE(m.has_table);

    CHECK(measure("") == structural::StructuralMetrics{0, 0, false, false});
    CHECK_FALSE(measure("We tabulate results in the appendix.").has_table);
    CHECK_FALSE(measure("The training is stable and we configure it.").has_table);
    CHECK_FALSE(measure("The training is stable and we configure it.").has_figure);
    CHECK(measure("See TAB. 3 for numbers.").has_table);
    CHECK(measure("Results (Tables 2-3) agree.").has_table);
    CHECK(measure("Check Fig.2, it helps.").has_figure);
}

TEST_CASE("appending the word table always sets the flag") {
    for (std::string doc : {"Plain text.", "Stable tabulation of configs.", "x"}) {
        CHECK(measure(doc + " table").has_table);
    }
}

TEST_CASE("detection is invariant under case") {
    for (std::string doc : {"see figure 1.", "See FIGURE 1.", "SEE Figure 1."}) CHECK(measure(doc).has_figure);
}

TEST_CASE("mention candidates include the dot-trimmed variant") {
    auto c = structural::mention_candidates("Fig.2, and tabs.");
    CHECK(c.count("fig.") == 1);
    CHECK(c.count("fig") == 1);
    CHECK(c.count("tabs.") == 1);
    CHECK(c.count("tabs") == 1);
}

TEST_CASE("counts are copied from the prepared text") {
    auto m = measure("One two three. Four five.");
    CHECK(m.word_count == 5);
    CHECK(m.sentence_count == 2);
}

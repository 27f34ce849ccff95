#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normlens/corpus.hpp"
#include "normlens/textprep.hpp"

namespace normlens::specificity {

using corpus::CommunityId;

/// Score stored for a (word, community) pair the community never uses.
inline constexpr double kUnseenScore = -1.0;

struct NpmiOptions {
    std::int64_t min_freq = 3;
    std::int64_t min_communities = 2;
};

/// Tokens of one document together with the community that wrote it.
struct CommunityTokens {
    CommunityId community;
    std::span<const std::string> tokens;
};

/// Word-by-community normalized PMI with token-level probabilities over the
/// pooled corpus (natural log).
class NpmiTable {
public:
    struct WordEntry {
        std::int64_t freq = 0;
        std::int64_t presence = 0;
        std::vector<std::int64_t> counts;  // per community, aligned with communities()
        std::vector<double> scores;        // per community
    };

    const std::vector<CommunityId>& communities() const { return communities_; }
    std::optional<std::size_t> community_index(const CommunityId& c) const;

    bool contains(std::string_view word) const;
    const WordEntry* entry(std::string_view word) const;
    std::optional<double> score(std::string_view word, const CommunityId& c) const;
    std::int64_t word_freq(std::string_view word) const;
    std::int64_t community_presence(std::string_view word) const;

    const std::map<std::string, WordEntry, std::less<>>& vocabulary() const { return vocab_; }
    std::int64_t total_tokens() const { return total_tokens_; }
    const std::vector<std::int64_t>& community_tokens() const { return community_tokens_; }
    const NpmiOptions& options() const { return options_; }
    const std::string& corpus_hash() const { return corpus_hash_; }
    /// Hash of the serialized table; identifies the table in metric configs.
    std::string fingerprint() const;

    /// Tab-separated flat file. Header lines start with '#'.
    void save(std::ostream& out) const;
    static NpmiTable load(std::istream& in);

private:
    friend NpmiTable build_npmi_table(std::span<const CommunityTokens>, const NpmiOptions&,
                                      std::string);

    std::vector<CommunityId> communities_;
    std::map<std::string, WordEntry, std::less<>> vocab_;
    std::vector<std::int64_t> community_tokens_;
    std::int64_t total_tokens_ = 0;
    NpmiOptions options_;
    std::string corpus_hash_;
};

/// npmi(w, c) = log(p(w,c) / (p(w) p(c))) / -log p(w,c). Words below the
/// frequency or community-presence thresholds are dropped. Throws
/// insufficient_communities (< 2) or empty_corpus (no tokens).
NpmiTable build_npmi_table(std::span<const CommunityTokens> documents,
                           const NpmiOptions& options = {}, std::string corpus_hash = {});

NpmiTable build_npmi_table(const corpus::Corpus& corpus, const NpmiOptions& options = {},
                           const text::AbbreviationList& abbreviations =
                               text::AbbreviationList::bundled());

struct SpecificityScore {
    double value = 0.0;
    std::size_t covered_tokens = 0;
    std::size_t total_tokens = 0;
};

/// Mean NPMI of the document's in-vocabulary tokens to `target`.
SpecificityScore specificity(std::span<const std::string> tokens, const CommunityId& target,
                             const NpmiTable& table);
SpecificityScore specificity(const text::PreparedText& doc, const CommunityId& target,
                             const NpmiTable& table);

}  // namespace normlens::specificity

#include "normlens/specificity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::specificity {

std::optional<std::size_t> NpmiTable::community_index(const CommunityId& c) const {
    auto it = std::lower_bound(communities_.begin(), communities_.end(), c);
    if (it == communities_.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - communities_.begin());
}

bool NpmiTable::contains(std::string_view word) const { return vocab_.find(word) != vocab_.end(); }

const NpmiTable::WordEntry* NpmiTable::entry(std::string_view word) const {
    auto it = vocab_.find(word);
    return it == vocab_.end() ? nullptr : &it->second;
}

std::optional<double> NpmiTable::score(std::string_view word, const CommunityId& c) const {
    auto idx = community_index(c);
    const auto* e = entry(word);
    if (!idx || !e) return std::nullopt;
    return e->scores[*idx];
}

std::int64_t NpmiTable::word_freq(std::string_view word) const {
    const auto* e = entry(word);
    return e ? e->freq : 0;
}

std::int64_t NpmiTable::community_presence(std::string_view word) const {
    const auto* e = entry(word);
    return e ? e->presence : 0;
}

std::string NpmiTable::fingerprint() const {
    std::ostringstream ss;
    save(ss);
    return util::hex64(util::fnv1a(ss.str()));
}

void NpmiTable::save(std::ostream& out) const {
    out << "#normlens-npmi\tversion=1\n";
    out << "#min_freq\t" << options_.min_freq << '\n';
    out << "#min_communities\t" << options_.min_communities << '\n';
    out << "#unseen\t" << util::format_double(kUnseenScore) << '\n';
    out << "#probability\ttoken-level\n";
    out << "#corpus_hash\t" << corpus_hash_ << '\n';
    out << "#total_tokens\t" << total_tokens_ << '\n';
    for (std::size_t c = 0; c < communities_.size(); ++c)
        out << "#community\t" << communities_[c].name << '\t' << community_tokens_[c] << '\n';
    out << "word\tcommunity\tscore\tcount\tword_freq\tpresence\n";
    for (const auto& [word, e] : vocab_) {
        for (std::size_t c = 0; c < communities_.size(); ++c) {
            out << word << '\t' << communities_[c].name << '\t' << util::format_double(e.scores[c])
                << '\t' << e.counts[c] << '\t' << e.freq << '\t' << e.presence << '\n';
        }
    }
}

NpmiTable NpmiTable::load(std::istream& in) {
    NpmiTable t;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::malformed_input,
                    "npmi table line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = util::split(line, '\t');
        if (line.front() == '#') {
            const auto key = fields[0];
            if (key == "#min_freq" && fields.size() == 2) t.options_.min_freq = std::stoll(std::string(fields[1]));
            else if (key == "#min_communities" && fields.size() == 2) t.options_.min_communities = std::stoll(std::string(fields[1]));
            else if (key == "#corpus_hash" && fields.size() == 2) t.corpus_hash_ = std::string(fields[1]);
            else if (key == "#total_tokens" && fields.size() == 2) t.total_tokens_ = std::stoll(std::string(fields[1]));
            else if (key == "#community" && fields.size() == 3) {
                t.communities_.push_back(CommunityId{std::string(fields[1])});
                t.community_tokens_.push_back(std::stoll(std::string(fields[2])));
            }
            continue;
        }
        if (!header_seen) {
            if (fields.size() != 6 || fields[0] != "word") fail("expected column header");
            header_seen = true;
            if (!std::is_sorted(t.communities_.begin(), t.communities_.end()))
                fail("communities not sorted");
            continue;
        }
        if (fields.size() != 6) fail("expected 6 columns");
        auto idx = t.community_index(CommunityId{std::string(fields[1])});
        if (!idx) fail("unknown community");
        auto& e = t.vocab_[std::string(fields[0])];
        if (e.scores.empty()) {
            e.scores.assign(t.communities_.size(), kUnseenScore);
            e.counts.assign(t.communities_.size(), 0);
        }
        try {
            e.scores[*idx] = std::stod(std::string(fields[2]));
            e.counts[*idx] = std::stoll(std::string(fields[3]));
            e.freq = std::stoll(std::string(fields[4]));
            e.presence = std::stoll(std::string(fields[5]));
        } catch (const std::exception&) {
            fail("bad number");
        }
    }
    if (!header_seen) throw Error(ErrorCode::malformed_input, "npmi table: missing header");
    return t;
}

NpmiTable build_npmi_table(std::span<const CommunityTokens> documents, const NpmiOptions& options,
                           std::string corpus_hash) {
    if (documents.empty()) throw Error(ErrorCode::empty_corpus, "no documents");

    NpmiTable t;
    t.options_ = options;
    t.corpus_hash_ = std::move(corpus_hash);
    {
        std::set<CommunityId> seen;
        for (const auto& d : documents) seen.insert(d.community);
        t.communities_.assign(seen.begin(), seen.end());
    }
    if (t.communities_.size() < 2)
        throw Error(ErrorCode::insufficient_communities,
                    "NPMI needs at least 2 communities, got " + std::to_string(t.communities_.size()));

    const std::size_t k = t.communities_.size();
    t.community_tokens_.assign(k, 0);
    std::map<std::string, std::vector<std::int64_t>, std::less<>> counts;
    for (const auto& d : documents) {
        const auto c = *t.community_index(d.community);
        for (const auto& tok : d.tokens) {
            auto it = counts.find(tok);
            if (it == counts.end()) it = counts.emplace(tok, std::vector<std::int64_t>(k, 0)).first;
            ++it->second[c];
        }
        t.community_tokens_[c] += static_cast<std::int64_t>(d.tokens.size());
        t.total_tokens_ += static_cast<std::int64_t>(d.tokens.size());
    }
    if (t.total_tokens_ == 0) throw Error(ErrorCode::empty_corpus, "corpus has no tokens");

    const double log_n = std::log(static_cast<double>(t.total_tokens_));
    for (auto& [word, per_community] : counts) {
        std::int64_t freq = 0;
        std::int64_t presence = 0;
        for (auto n : per_community) {
            freq += n;
            presence += n > 0 ? 1 : 0;
        }
        if (freq < options.min_freq || presence < options.min_communities) continue;

        NpmiTable::WordEntry e;
        e.freq = freq;
        e.presence = presence;
        e.scores.assign(k, kUnseenScore);
        const double log_pw = std::log(static_cast<double>(freq)) - log_n;
        for (std::size_t c = 0; c < k; ++c) {
            const auto n = per_community[c];
            if (n == 0) continue;
            const double log_pwc = std::log(static_cast<double>(n)) - log_n;
            const double log_pc = std::log(static_cast<double>(t.community_tokens_[c])) - log_n;
            const double pmi = log_pwc - log_pw - log_pc;
            double npmi = log_pwc == 0.0 ? 1.0 : pmi / -log_pwc;
            e.scores[c] = std::clamp(npmi, -1.0, 1.0);
        }
        e.counts = std::move(per_community);
        t.vocab_.emplace(word, std::move(e));
    }
    return t;
}

NpmiTable build_npmi_table(const corpus::Corpus& corpus, const NpmiOptions& options,
                           const text::AbbreviationList& abbreviations) {
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(corpus.documents.size());
    for (const auto& d : corpus.documents) {
        auto prepared = text::prepare(d.intro_text, abbreviations);
        std::vector<std::string> flat;
        flat.reserve(prepared.word_count);
        for (auto& s : prepared.words_per_sentence)
            for (auto& w : s) flat.push_back(std::move(w));
        tokens.push_back(std::move(flat));
    }
    std::vector<CommunityTokens> docs;
    docs.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i)
        docs.push_back({corpus.documents[i].community, tokens[i]});
    return build_npmi_table(docs, options, corpus.content_hash());
}

SpecificityScore specificity(std::span<const std::string> tokens, const CommunityId& target,
                             const NpmiTable& table) {
    auto idx = table.community_index(target);
    if (!idx)
        throw Error(ErrorCode::unknown_community,
                    "community '" + target.name + "' is not in the NPMI table");
    SpecificityScore s;
    s.total_tokens = tokens.size();
    double sum = 0.0;
    for (const auto& tok : tokens) {
        if (const auto* e = table.entry(tok)) {
            sum += e->scores[*idx];
            ++s.covered_tokens;
        }
    }
    s.value = s.covered_tokens == 0 ? 0.0 : sum / static_cast<double>(s.covered_tokens);
    return s;
}

SpecificityScore specificity(const text::PreparedText& doc, const CommunityId& target,
                             const NpmiTable& table) {
    std::vector<std::string> flat;
    flat.reserve(doc.word_count);
    for (const auto& s : doc.words_per_sentence) flat.insert(flat.end(), s.begin(), s.end());
    return specificity(flat, target, table);
}

}  // namespace normlens::specificity

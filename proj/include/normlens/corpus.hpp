#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace normlens::corpus {

/// Canonical community tag such as "nlp" or "ml".
struct CommunityId {
    std::string name;

    auto operator<=>(const CommunityId&) const = default;
};

struct Document {
    std::string id;
    std::string venue;
    CommunityId community;
    std::string title;
    std::string raw_text;
    std::string intro_text;
};

/// Case-insensitive whole-name mapping from venue to community.
class VenueMap {
public:
    struct Entry {
        std::string venue;
        CommunityId community;
    };

    VenueMap() = default;

    /// Parses the `[communities]` / `[venues]` key-value format. A venue that
    /// resolves to two different communities is rejected.
    static VenueMap parse(std::string_view text);
    static VenueMap load(const std::string& path);
    /// The bundled default: 11 communities, 38 venues.
    static const VenueMap& bundled();

    void add(std::string venue, CommunityId community);
    void set_display_name(const CommunityId& community, std::string name);

    std::optional<CommunityId> resolve(std::string_view venue) const;
    /// Human-readable name; falls back to the tag itself.
    std::string display_name(const CommunityId& community) const;

    const std::vector<Entry>& entries() const { return entries_; }
    std::set<CommunityId> communities() const;

private:
    std::vector<Entry> entries_;
    std::map<std::string, CommunityId> by_key_;
    std::map<CommunityId, std::string> display_;
};

struct Corpus {
    std::vector<Document> documents;
    std::set<CommunityId> communities;

    const Document* find(std::string_view id) const;
    /// Stable hash over ids, communities and introduction texts.
    std::string content_hash() const;
};

/// Heading rules used to locate the introduction in full paper text.
struct SectionRules {
    /// Keyword that identifies the introduction heading (case-insensitive).
    std::string intro_keyword = "introduction";
    /// Longest line, in characters, still considered a heading.
    std::size_t max_heading_length = 80;
};

/// Returns the whitespace-normalized text between the first introduction
/// heading and the next top-level heading, or nullopt when no heading
/// matches. Throws Error(malformed_input) on empty input.
std::optional<std::string> extract_introduction(std::string_view raw_text,
                                                const SectionRules& rules = {});

/// True when `line` looks like a top-level section heading.
bool is_heading(std::string_view line, const SectionRules& rules = {});

/// Reads UTF-8 JSON lines with fields id, venue, optional title, and either
/// intro_text or raw_text.
Corpus load_corpus(const std::string& path, const VenueMap& map);
Corpus parse_corpus(std::string_view jsonl, const VenueMap& map,
                    std::string_view source_name = "<memory>");
/// Writes the normalized corpus (id, venue, community, title, intro_text).
std::string serialize_corpus(const Corpus& corpus);

std::map<CommunityId, std::size_t> corpus_stats(const Corpus& corpus);

}  // namespace normlens::corpus

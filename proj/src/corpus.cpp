#include "normlens/corpus.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

#include "normlens/bundled_data.hpp"
#include "normlens/error.hpp"
#include "normlens/util.hpp"

namespace normlens::corpus {

namespace {

bool is_roman(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'i': case 'v': case 'x': case 'l': case 'c': return true;
        default: return false;
    }
}

struct HeadingParts {
    bool numbered = false;
    bool subsection = false;
    std::string_view title;
};

// Parses "<numbering> <Title Case Words>" where numbering is one of "1",
// "1.", "1)", "I.", "I)" or absent.
std::optional<HeadingParts> split_heading(std::string_view line, const SectionRules& rules) {
    line = util::trim(line);
    if (line.empty() || line.size() > rules.max_heading_length) return std::nullopt;

    HeadingParts parts;
    std::size_t i = 0;
    if (std::isdigit(static_cast<unsigned char>(line[0]))) {
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
        while (i + 1 < line.size() && line[i] == '.' &&
               std::isdigit(static_cast<unsigned char>(line[i + 1]))) {
            parts.subsection = true;
            ++i;
            while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
        }
        if (i < line.size() && (line[i] == '.' || line[i] == ')')) ++i;
        if (i >= line.size() || !std::isspace(static_cast<unsigned char>(line[i])))
            return std::nullopt;
        parts.numbered = true;
    } else {
        std::size_t j = 0;
        while (j < line.size() && is_roman(line[j])) ++j;
        if (j > 0 && j + 1 < line.size() && (line[j] == '.' || line[j] == ')') &&
            std::isspace(static_cast<unsigned char>(line[j + 1]))) {
            i = j + 1;
            parts.numbered = true;
        }
    }

    auto title = util::trim(line.substr(i));
    bool trailing_period = false;
    while (!title.empty() && (title.back() == ':' || title.back() == '.')) {
        trailing_period = trailing_period || title.back() == '.';
        title.remove_suffix(1);
        title = util::trim(title);
    }
    // An unnumbered line ending in a period reads as a short sentence.
    if (!parts.numbered && trailing_period) return std::nullopt;
    if (title.empty() || !std::isalpha(static_cast<unsigned char>(title.front())))
        return std::nullopt;
    if (title.find_first_of(".!?;") != std::string_view::npos) return std::nullopt;
    // Captions such as "Table 1: Results" are not section headings.
    if (!parts.numbered && title.find_first_of("0123456789") != std::string_view::npos)
        return std::nullopt;

    std::size_t words = 0;
    bool first = true;
    for (auto word : util::split(title, ' ')) {
        if (word.empty()) continue;
        ++words;
        const auto lead = static_cast<unsigned char>(word.front());
        const bool upper = std::isupper(lead) != 0;
        if (first && !upper) return std::nullopt;
        // Short function words ("and", "of", "for") may stay lower-case.
        if (!upper && std::isalpha(lead) && word.size() > 3) return std::nullopt;
        first = false;
    }
    if (words == 0 || words > (parts.numbered ? 10u : 6u)) return std::nullopt;
    parts.title = title;
    return parts;
}

bool contains_icase(std::string_view haystack, std::string_view needle) {
    return util::to_lower(haystack).find(util::to_lower(needle)) != std::string::npos;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

bool is_heading(std::string_view line, const SectionRules& rules) {
    auto parts = split_heading(line, rules);
    return parts && !parts->subsection;
}

std::optional<std::string> extract_introduction(std::string_view raw_text,
                                                const SectionRules& rules) {
    if (util::trim(raw_text).empty())
        throw Error(ErrorCode::malformed_input, "raw text is empty");

    auto lines = util::split(raw_text, '\n');
    std::optional<std::size_t> heading;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto parts = split_heading(lines[i], rules);
        if (parts && !parts->subsection && contains_icase(parts->title, rules.intro_keyword)) {
            heading = i;
            break;
        }
    }
    if (!heading) return std::nullopt;

    std::string body;
    for (std::size_t i = *heading + 1; i < lines.size(); ++i) {
        if (is_heading(lines[i], rules)) break;
        body.append(lines[i]);
        body.push_back('\n');
    }
    return collapse_whitespace(body);
}

// ---------------------------------------------------------------------------

VenueMap VenueMap::parse(std::string_view text) {
    VenueMap map;
    enum class Section { none, communities, venues } section = Section::none;
    std::size_t line_no = 0;
    for (auto raw : util::split(text, '\n')) {
        ++line_no;
        auto line = util::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line == "[communities]") section = Section::communities;
            else if (line == "[venues]") section = Section::venues;
            else
                throw Error(ErrorCode::malformed_input,
                            "venue map line " + std::to_string(line_no) + ": unknown section");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::malformed_input,
                        "venue map line " + std::to_string(line_no) + ": expected key = value");
        auto key = util::trim(line.substr(0, eq));
        auto value = util::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::malformed_input,
                        "venue map line " + std::to_string(line_no) + ": empty key or value");
        if (section == Section::communities) {
            map.set_display_name(CommunityId{util::to_lower(key)}, std::string(value));
        } else {
            // Lines outside any section are treated as venues.
            map.add(std::string(key), CommunityId{util::to_lower(value)});
        }
    }
    return map;
}

VenueMap VenueMap::load(const std::string& path) { return parse(util::read_file(path)); }

const VenueMap& VenueMap::bundled() {
    static const VenueMap map = parse(bundled::venue_map);
    return map;
}

void VenueMap::add(std::string venue, CommunityId community) {
    auto key = util::to_lower(util::trim(venue));
    if (auto it = by_key_.find(key); it != by_key_.end()) {
        if (it->second != community)
            throw Error(ErrorCode::malformed_input,
                        "venue '" + venue + "' maps to both '" + it->second.name + "' and '" +
                            community.name + "'");
        return;
    }
    by_key_.emplace(key, community);
    entries_.push_back({std::move(venue), std::move(community)});
}

void VenueMap::set_display_name(const CommunityId& community, std::string name) {
    display_[community] = std::move(name);
}

std::optional<CommunityId> VenueMap::resolve(std::string_view venue) const {
    auto it = by_key_.find(util::to_lower(util::trim(venue)));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

std::string VenueMap::display_name(const CommunityId& community) const {
    auto it = display_.find(community);
    return it == display_.end() ? community.name : it->second;
}

std::set<CommunityId> VenueMap::communities() const {
    std::set<CommunityId> out;
    for (const auto& e : entries_) out.insert(e.community);
    return out;
}

// ---------------------------------------------------------------------------

const Document* Corpus::find(std::string_view id) const {
    for (const auto& d : documents)
        if (d.id == id) return &d;
    return nullptr;
}

std::string Corpus::content_hash() const {
    std::uint64_t h = util::fnv1a("normlens-corpus");
    for (const auto& d : documents) {
        h = util::fnv1a(d.id, h);
        h = util::fnv1a("\x1f", h);
        h = util::fnv1a(d.community.name, h);
        h = util::fnv1a("\x1f", h);
        h = util::fnv1a(d.intro_text, h);
        h = util::fnv1a("\x1e", h);
    }
    return util::hex64(h);
}

namespace {

std::string optional_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string())
        throw Error(ErrorCode::malformed_input, std::string("field '") + key + "' is not a string");
    return it->get<std::string>();
}

}  // namespace

Corpus parse_corpus(std::string_view jsonl, const VenueMap& map, std::string_view source_name) {
    Corpus corpus;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (auto raw : util::split(jsonl, '\n')) {
        ++line_no;
        auto line = util::trim(raw);
        if (line.empty()) continue;
        const auto where = std::string(source_name) + ":" + std::to_string(line_no);

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::malformed_input, where + ": " + e.what());
        }
        if (!j.is_object()) throw Error(ErrorCode::malformed_input, where + ": not an object");

        Document doc;
        doc.id = optional_string(j, "id");
        if (doc.id.empty()) throw Error(ErrorCode::malformed_input, where + ": missing id");
        doc.venue = optional_string(j, "venue");
        doc.title = optional_string(j, "title");
        doc.raw_text = optional_string(j, "raw_text");
        doc.intro_text = optional_string(j, "intro_text");

        if (!seen.insert(doc.id).second)
            throw Error(ErrorCode::duplicate_id, where + ": duplicate id '" + doc.id + "'");

        auto community = map.resolve(doc.venue);
        if (!community)
            throw Error(ErrorCode::unknown_venue,
                        "record '" + doc.id + "': unknown venue '" + doc.venue + "'");
        doc.community = *community;

        if (util::trim(doc.intro_text).empty()) {
            if (util::trim(doc.raw_text).empty())
                throw Error(ErrorCode::malformed_input,
                            "record '" + doc.id + "': neither intro_text nor raw_text");
            auto intro = extract_introduction(doc.raw_text);
            if (!intro || intro->empty())
                throw Error(ErrorCode::not_found,
                            "record '" + doc.id + "': no introduction heading found");
            doc.intro_text = std::move(*intro);
        }
        corpus.communities.insert(doc.community);
        corpus.documents.push_back(std::move(doc));
    }
    if (corpus.documents.empty())
        throw Error(ErrorCode::empty_corpus, std::string(source_name) + ": no records");
    return corpus;
}

Corpus load_corpus(const std::string& path, const VenueMap& map) {
    return parse_corpus(util::read_file(path), map, path);
}

std::string serialize_corpus(const Corpus& corpus) {
    std::string out;
    for (const auto& d : corpus.documents) {
        nlohmann::ordered_json j;
        j["id"] = d.id;
        j["venue"] = d.venue;
        j["community"] = d.community.name;
        if (!d.title.empty()) j["title"] = d.title;
        j["intro_text"] = d.intro_text;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::map<CommunityId, std::size_t> corpus_stats(const Corpus& corpus) {
    std::map<CommunityId, std::size_t> counts;
    for (const auto& d : corpus.documents) ++counts[d.community];
    return counts;
}

}  // namespace normlens::corpus

#include "normlens/textprep.hpp"

#include <algorithm>
#include <cctype>

#include "normlens/bundled_data.hpp"
#include "normlens/util.hpp"

namespace normlens::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending = false;
    for (char c : text) {
        if (is_space(c)) {
            pending = !out.empty();
        } else {
            if (pending) out.push_back(' ');
            pending = false;
            out.push_back(c);
        }
    }
    return out;
}

// Length of a "scheme://" prefix at the start of s, or 0.
std::size_t scheme_length(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return 0;
    std::size_t i = 1;
    while (i < s.size() && (is_alnum(s[i]) || s[i] == '+' || s[i] == '.' || s[i] == '-')) ++i;
    if (s.substr(i, 3) == "://") return i + 3;
    return 0;
}

bool url_starts_at(std::string_view text, std::size_t i) {
    if (i > 0) {
        char prev = text[i - 1];
        if (!is_space(prev) && prev != '(' && prev != '[' && prev != '<' && prev != '"' &&
            prev != '\'')
            return false;
    }
    auto rest = text.substr(i);
    if (rest.size() >= 4 && util::iequals(rest.substr(0, 4), "www.")) return true;
    return scheme_length(rest) > 0;
}

constexpr std::string_view kUrlTrailing = ".,;:!?)]}>\"'";
constexpr std::string_view kClosers = "\"')]}";

}  // namespace

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
    for (auto& e : entries) add(std::move(e));
}

AbbreviationList AbbreviationList::parse(std::string_view text) {
    AbbreviationList list;
    for (auto& line : util::config_lines(text)) list.add(std::move(line));
    return list;
}

AbbreviationList AbbreviationList::load(const std::string& path) {
    return parse(util::read_file(path));
}

const AbbreviationList& AbbreviationList::bundled() {
    static const AbbreviationList list = parse(bundled::abbreviations);
    return list;
}

void AbbreviationList::add(std::string entry) {
    auto normalized = util::to_lower(collapse_whitespace(entry));
    if (normalized.empty()) return;
    if (std::find(entries_.begin(), entries_.end(), normalized) == entries_.end())
        entries_.push_back(std::move(normalized));
}

bool AbbreviationList::guards(std::string_view prefix) const {
    for (const auto& e : entries_) {
        if (prefix.size() < e.size()) continue;
        auto tail = prefix.substr(prefix.size() - e.size());
        if (!util::iequals(tail, e)) continue;
        if (prefix.size() == e.size() || !is_alnum(prefix[prefix.size() - e.size() - 1]))
            return true;
    }
    return false;
}

std::string strip_urls(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (url_starts_at(text, i)) {
            std::size_t end = i;
            while (end < text.size() && !is_space(text[end])) ++end;
            std::size_t url_end = end;
            while (url_end > i && kUrlTrailing.find(text[url_end - 1]) != std::string_view::npos)
                --url_end;
            out.push_back(' ');
            out.append(text.substr(url_end, end - url_end));
            i = end;
            continue;
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

std::vector<std::string> split_sentences(std::string_view raw,
                                         const AbbreviationList& abbreviations) {
    const std::string text = collapse_whitespace(raw);
    std::vector<std::string> sentences;
    std::size_t start = 0;
    std::size_t i = 0;
    auto emit = [&](std::size_t end) {
        auto s = util::trim(std::string_view(text).substr(start, end - start));
        if (!s.empty()) sentences.emplace_back(s);
        start = end;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
        const bool single_period = (j - i == 1) && c == '.';
        while (j < text.size() && kClosers.find(text[j]) != std::string_view::npos) ++j;
        if (j < text.size() && !is_space(text[j])) {
            i = j;
            continue;
        }
        if (single_period &&
            abbreviations.guards(std::string_view(text).substr(start, i + 1 - start))) {
            i = j;
            continue;
        }
        emit(j);
        i = j;
    }
    emit(text.size());
    return sentences;
}

std::vector<std::string> tokenize(std::string_view sentence) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        std::size_t b = 0;
        std::size_t e = current.size();
        while (b < e && (current[b] == '-' || current[b] == '\'')) ++b;
        while (e > b && (current[e - 1] == '-' || current[e - 1] == '\'')) --e;
        if (b < e) {
            auto token = current.substr(b, e - b);
            if (std::any_of(token.begin(), token.end(), is_alnum))
                tokens.push_back(std::move(token));
        }
        current.clear();
    };
    for (char raw : sentence) {
        const auto u = static_cast<unsigned char>(raw);
        // Bytes >= 0x80 (non-ASCII) are boundaries.
        const char c = u < 0x80 ? static_cast<char>(std::tolower(u)) : ' ';
        const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c == '-';
        if (keep) {
            current.push_back(c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

PreparedText prepare(std::string_view text, const AbbreviationList& abbreviations) {
    PreparedText out;
    for (auto& sentence : split_sentences(strip_urls(text), abbreviations)) {
        auto tokens = tokenize(sentence);
        if (tokens.empty()) continue;
        out.word_count += tokens.size();
        out.sentences.push_back(std::move(sentence));
        out.words_per_sentence.push_back(std::move(tokens));
    }
    out.sentence_count = out.sentences.size();
    return out;
}

}  // namespace normlens::text

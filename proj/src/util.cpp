#include "normlens/util.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "normlens/error.hpp"

namespace normlens {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::malformed_input: return "malformed-input";
        case ErrorCode::not_found: return "not-found";
        case ErrorCode::unknown_venue: return "unknown-venue";
        case ErrorCode::duplicate_id: return "duplicate-id";
        case ErrorCode::empty_corpus: return "empty-corpus";
        case ErrorCode::insufficient_communities: return "insufficient-communities";
        case ErrorCode::unknown_community: return "unknown-community";
        case ErrorCode::empty_sentence: return "empty-sentence";
        case ErrorCode::empty_document: return "empty-document";
        case ErrorCode::scorer_unavailable: return "scorer-unavailable";
        case ErrorCode::judge_unavailable: return "judge-unavailable";
        case ErrorCode::classifier_unavailable: return "classifier-unavailable";
        case ErrorCode::backend_unavailable: return "backend-unavailable";
        case ErrorCode::insufficient_data: return "insufficient-data";
        case ErrorCode::zero_variance: return "zero-variance";
        case ErrorCode::config_mismatch: return "config-mismatch";
        case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

namespace util {

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::string format_double(double value) {
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int digits) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed, digits);
    std::string out(buf.data(), ptr);
    if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

std::string read_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::not_found, path + " does not exist");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path);
}

std::vector<std::string> config_lines(std::string_view text) {
    std::vector<std::string> lines;
    for (auto line : split(text, '\n')) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        lines.emplace_back(t);
    }
    return lines;
}

}  // namespace util
}  // namespace normlens

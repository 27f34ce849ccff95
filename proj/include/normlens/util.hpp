#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace normlens::util {

/// 64-bit FNV-1a. Stable across platforms, used for corpus and config hashes.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

std::uint64_t splitmix64(std::uint64_t x);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Shortest round-trip decimal representation.
std::string format_double(double value);
/// Fixed-point representation with `digits` decimals.
std::string format_fixed(double value, int digits);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Non-empty, non-comment ('#') lines with surrounding whitespace removed.
std::vector<std::string> config_lines(std::string_view text);

}  // namespace normlens::util

#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rolelens::text {

// UTF-8 helpers. Invalid byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

// Number of Unicode scalar values.
std::size_t char_count(std::string_view s);

bool is_space(char32_t c);
bool is_letter(char32_t c);
bool is_digit(char32_t c);
bool is_upper(char32_t c);
bool is_word_char(char32_t c);
char32_t to_lower(char32_t c);

std::string to_lower(std::string_view s);

// Runs of whitespace collapse to a single space; leading/trailing whitespace is dropped.
std::string normalize_whitespace(std::string_view s);

std::string trim(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

// Strips leading and trailing characters that are neither letters nor digits.
std::string strip_punctuation(std::string_view token);

// True when nonempty and every scalar value is a letter.
bool is_alphabetic(std::string_view s);

// Whitespace tokens, punctuation-stripped, keeping those with at least one letter.
std::vector<std::string> words(std::string_view s);

// One entry per line, trimmed; blank lines and lines starting with '#' are skipped.
std::set<std::string> load_word_list(const std::filesystem::path& path, bool lowercase);
std::set<std::string> parse_word_list(std::string_view content, bool lowercase);

std::string read_file(const std::filesystem::path& path);

}  // namespace rolelens::text

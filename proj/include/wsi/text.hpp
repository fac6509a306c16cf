#pragma once

// UTF-8 text helpers shared by the tokenizer, embedding vocabulary and the
// target-form exclusion rule. Offsets and lengths are in Unicode code points.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wsi::text {

// NFC normalization followed by full Unicode lowercasing.
std::string normalize(std::string_view s);

// Split on Unicode whitespace, strip leading/trailing punctuation from each
// piece, normalize, drop empties. Inner punctuation (hyphens, apostrophes)
// is kept.
std::vector<std::string> tokenize(std::string_view s);

// Strips leading/trailing punctuation and normalizes a single token.
std::string clean_token(std::string_view s);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view s);

std::size_t length(std::string_view utf8);

// Code-point substring [start, end), clamped to the string.
std::string substr(std::string_view utf8, std::size_t start, std::size_t end);

// Length in code points of the longest common prefix.
std::size_t common_prefix_length(std::string_view a, std::string_view b);

// Trims ASCII whitespace.
std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace wsi::text

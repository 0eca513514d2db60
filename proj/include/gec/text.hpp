#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gec {

/// A sentence as whitespace-delimited tokens. Tokens never contain whitespace.
using Tokens = std::vector<std::string>;

/// Splits on runs of ASCII whitespace (space, tab, CR, LF, VT, FF).
Tokens split_tokens(std::string_view text);

/// Joins with single spaces.
std::string join_tokens(std::span<const std::string> tokens);

/// Collapses internal whitespace to single spaces and trims both ends.
std::string normalize_space(std::string_view text);

/// Decodes UTF-8 into code points. Throws std::invalid_argument on malformed input.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(char32_t code_point);

}  // namespace gec

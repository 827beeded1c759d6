#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ivr {

using Token = std::string;
using TokenList = std::vector<Token>;

/// Splits UTF-8 text into normalized word tokens.
///
/// Each code point is simple-case-folded, code points of Unicode general
/// category P (punctuation) are removed, and runs of Unicode whitespace
/// separate tokens. Invalid UTF-8 sequences decode to U+FFFD. The function is
/// total and idempotent: normalize(join_tokens(normalize(x))) == normalize(x).
TokenList normalize(std::string_view raw_text);

std::string join_tokens(const TokenList& tokens, std::string_view sep = " ");

namespace utf8 {

/// Decodes UTF-8, replacing malformed sequences with U+FFFD.
std::u32string decode(std::string_view bytes);
void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

}  // namespace utf8

namespace unicode {

char32_t simple_fold(char32_t cp);
bool is_punctuation(char32_t cp);
bool is_whitespace(char32_t cp);

}  // namespace unicode

}  // namespace ivr

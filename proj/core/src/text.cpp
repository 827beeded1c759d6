#include "ivr/text.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>

namespace ivr {

namespace {

struct CaseFoldPair {
  char32_t from;
  char32_t to;
};

struct CodePointRange {
  char32_t lo;
  char32_t hi;
};

#include "unicode_tables.inc"

constexpr char32_t kReplacement = 0xFFFD;

}  // namespace

namespace unicode {

char32_t simple_fold(char32_t cp) {
  auto it = std::lower_bound(std::begin(kCaseFold), std::end(kCaseFold), cp,
                             [](const CaseFoldPair& p, char32_t v) { return p.from < v; });
  if (it != std::end(kCaseFold) && it->from == cp) {
    return it->to;
  }
  return cp;
}

bool is_punctuation(char32_t cp) {
  auto it = std::upper_bound(std::begin(kPunctuation), std::end(kPunctuation), cp,
                             [](char32_t v, const CodePointRange& r) { return v < r.lo; });
  if (it == std::begin(kPunctuation)) {
    return false;
  }
  --it;
  return cp >= it->lo && cp <= it->hi;
}

bool is_whitespace(char32_t cp) {
  return std::binary_search(std::begin(kWhitespace), std::end(kWhitespace), cp);
}

}  // namespace unicode

namespace utf8 {

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<std::uint8_t>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
      min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
      min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
      min = 0x10000;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    int consumed = 1;
    bool ok = true;
    for (; consumed < len; ++consumed) {
      if (i + consumed >= n) {
        ok = false;
        break;
      }
      const auto b = static_cast<std::uint8_t>(bytes[i + consumed]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok || cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      i += static_cast<std::size_t>(consumed);
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    append(out, cp);
  }
  return out;
}

}  // namespace utf8

TokenList normalize(std::string_view raw_text) {
  TokenList tokens;
  std::string current;
  for (char32_t cp : utf8::decode(raw_text)) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (unicode::is_punctuation(cp)) {
      continue;
    }
    utf8::append(current, unicode::simple_fold(cp));
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

std::string join_tokens(const TokenList& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += tokens[i];
  }
  return out;
}

}  // namespace ivr

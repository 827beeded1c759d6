#include <gtest/gtest.h>

#include <random>

#include "ivr/text.hpp"

using ivr::normalize;
using ivr::TokenList;

TEST(Normalize, FoldsCaseAndStripsPunctuation) {
  EXPECT_EQ(normalize("Сәлем,  ӘЛЕМ!"), (TokenList{"сәлем", "әлем"}));
}

TEST(Normalize, EmptyInput) {
  EXPECT_TRUE(normalize("").empty());
  EXPECT_TRUE(normalize(" \t\n  ").empty());
  EXPECT_TRUE(normalize("?!…").empty());
}

TEST(Normalize, PunctuationInsideWordIsRemovedNotSplit) {
  EXPECT_EQ(normalize("PIN-код"), (TokenList{"pinкод"}));
  EXPECT_EQ(normalize("«Иә»"), (TokenList{"иә"}));
}

TEST(Normalize, UnicodeWhitespaceSeparates) {
  EXPECT_EQ(normalize("бір екі　үш"), (TokenList{"бір", "екі", "үш"}));
}

TEST(Normalize, KazakhLettersFold) {
  EXPECT_EQ(normalize("ҚҰҮҒӨҺІӘҢ"), (TokenList{"құүғөһіәң"}));
  EXPECT_EQ(normalize("ÆØÅ ΣΑΣ"), (TokenList{"æøå", "σασ"}));
}

TEST(Normalize, InvalidUtf8BecomesReplacementCharacter) {
  const std::string bad = std::string("ab") + char(0xC3) + "cd";
  EXPECT_EQ(normalize(bad), (TokenList{"ab\xEF\xBF\xBD" "cd"}));
}

TEST(Normalize, GarbageMarkersLoseTheirBrackets) {
  EXPECT_EQ(normalize("⟨err17⟩"), (TokenList{"err17"}));
}

TEST(Utf8, RoundTripsValidText) {
  const std::string s = "Мен картамды жоғалттым 😀";
  EXPECT_EQ(ivr::utf8::encode(ivr::utf8::decode(s)), s);
}

namespace {

std::string random_unicode(std::mt19937_64& rng) {
  static const std::pair<char32_t, char32_t> ranges[] = {
      {0x20, 0x7E},     {0xA0, 0xFF},       {0x370, 0x3FF},   {0x400, 0x4FF},
      {0x2000, 0x206F}, {0x3000, 0x303F},   {0x1E00, 0x1EFF}, {0x10400, 0x1044F},
      {0x1F600, 0x1F64F}, {0x0300, 0x036F}, {0xFF00, 0xFFEF}, {0x0530, 0x058F}};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(ranges) - 1);
  std::uniform_int_distribution<int> len(0, 40);
  std::string out;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    const auto [lo, hi] = ranges[pick(rng)];
    std::uniform_int_distribution<std::uint32_t> cp(lo, hi);
    ivr::utf8::append(out, static_cast<char32_t>(cp(rng)));
  }
  if (rng() % 8 == 0) out.push_back(static_cast<char>(0x80 | (rng() % 64)));  // stray byte
  return out;
}

}  // namespace

TEST(NormalizeProperty, IdempotentOnRandomUnicode) {
  std::mt19937_64 rng(20261016);
  for (int i = 0; i < 1000; ++i) {
    const std::string s = random_unicode(rng);
    const TokenList once = normalize(s);
    ASSERT_EQ(normalize(ivr::join_tokens(once)), once) << "input #" << i;
    for (const auto& t : once) {
      ASSERT_FALSE(t.empty());
    }
  }
}

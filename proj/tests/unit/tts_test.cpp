#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "ivr/errors.hpp"
#include "ivr/tts.hpp"
#include "test_support.hpp"

using namespace ivr;

TEST(RenderConfirmation, SubstitutesDisplayName) {
  const auto tmpl = parse_confirmation_template("Сіздің мәселеңіз: {class_name}. Дұрыс па?");
  const auto c = support::make_class("card_lost", "Q17", {"x"}, {{"kk", "карта жоғалды"}});
  const auto r = render_confirmation(c, "kk", tmpl);
  EXPECT_EQ(r.text, "Сіздің мәселеңіз: карта жоғалды. Дұрыс па?");
  EXPECT_FALSE(r.warning.has_value());
}

TEST(RenderConfirmation, FallsBackToClassId) {
  const auto tmpl = parse_confirmation_template("Сіздің мәселеңіз: {class_name}. Дұрыс па?");
  const auto c = support::make_class("card_lost", "Q17", {"x"}, {{"ru", "утеря карты"}});
  const auto r = render_confirmation(c, "kk", tmpl);
  EXPECT_NE(r.text.find("card_lost"), std::string::npos);
  EXPECT_TRUE(r.warning.has_value());
}

TEST(RenderConfirmation, TemplateNeedsClassName) {
  EXPECT_THROW(parse_confirmation_template("Дұрыс па?"), TemplateError);
}

TEST(RenderConfirmation, GoldenFiveClassesTwoLanguages) {
  const auto kk = parse_confirmation_template("Сіздің мәселеңіз: {class_name}. Дұрыс па?");
  const auto ru = parse_confirmation_template("Ваш вопрос: {class_name}. Верно?");
  const std::vector<IntentClass> classes{
      support::make_class("card_lost", "Q17", {"x"}, {{"kk", "карта жоғалды"}, {"ru", "утеря карты"}}),
      support::make_class("balance", "Q01", {"x"}, {{"kk", "шоттағы қалдық"}, {"ru", "баланс счета"}}),
      support::make_class("transfer", "Q02", {"x"}, {{"ru", "денежный перевод"}}),
      support::make_class("loan", "Q04", {"x"}, {{"kk", "несие"}, {"ru", "кредит"}}),
      support::make_class("pin_reset", "Q07", {"x"}, {{"kk", "PIN кодты қалпына келтіру"}}),
  };
  std::ostringstream out;
  for (const auto& c : classes) {
    out << c.class_id << "\tkk\t" << render_confirmation(c, "kk", kk).text << "\n";
    out << c.class_id << "\tru\t" << render_confirmation(c, "ru", ru).text << "\n";
  }
  EXPECT_EQ(out.str(),
            support::slurp(std::filesystem::path(IVR_GOLDEN_DIR) / "confirmation_renders.tsv"));
}

TEST(RenderConfirmation, AlwaysNonEmptyAndNamesTheClass) {
  const auto tmpl = parse_confirmation_template("{class_name}");
  const auto cfg = support::toy_config();
  for (const auto& c : cfg->taxonomy.classes()) {
    for (const std::string lang : {"kk", "ru", "en"}) {
      const auto r = render_confirmation(c, lang, tmpl);
      ASSERT_FALSE(r.text.empty());
      const auto it = c.display_name.find(lang);
      const std::string& expect = it != c.display_name.end() ? it->second : c.class_id;
      EXPECT_NE(r.text.find(expect), std::string::npos);
    }
  }
}

TEST(MockTts, DeterministicAndLanguageSensitive) {
  const MockTts tts;
  const SynthesisRequest a{"Сәлеметсіз бе", "kk", std::nullopt};
  EXPECT_EQ(synthesize(a, tts), synthesize(a, tts));
  EXPECT_EQ(synthesize(a, tts).rfind("mock-audio:", 0), 0u);
  EXPECT_NE(synthesize(a, tts), synthesize({"Сәлеметсіз бе", "ru", std::nullopt}, tts));
  EXPECT_EQ(synthesize(a, tts), synthesize({"Сәлеметсіз бе", "kk", "voice-2"}, tts));
}

TEST(MockTts, EmptyTextIsRejected) {
  const MockTts tts;
  EXPECT_THROW(synthesize({"", "kk", std::nullopt}, tts), ConfigError);
}

TEST(MockTts, NoCollisionsOnOneCharacterEdits) {
  const MockTts tts;
  std::mt19937_64 rng(2718);
  const std::u32string alphabet = U"абвгдеәіңғүұқөһ abcdefg0123";
  std::set<std::string> seen_refs;
  std::set<std::string> seen_texts;
  for (int i = 0; i < 10000; ++i) {
    std::u32string s;
    const int len = 1 + static_cast<int>(rng() % 24);
    for (int k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    std::u32string t = s;
    const std::size_t pos = rng() % t.size();
    char32_t repl = t[pos];
    while (repl == t[pos]) repl = alphabet[rng() % alphabet.size()];
    t[pos] = repl;
    const std::string a = utf8::encode(s);
    const std::string b = utf8::encode(t);
    ASSERT_NE(tts.synthesize({a, "kk", std::nullopt}), tts.synthesize({b, "kk", std::nullopt}));
    if (seen_texts.insert(a).second) {
      ASSERT_TRUE(seen_refs.insert(tts.synthesize({a, "kk", std::nullopt})).second) << a;
    }
  }
}

#include "ivr/confirmation.hpp"

namespace ivr {

std::string_view to_string(Confirmation c) noexcept {
  switch (c) {
    case Confirmation::Yes:
      return "yes";
    case Confirmation::No:
      return "no";
    case Confirmation::Unclear:
      return "unclear";
  }
  return "unclear";
}

void ConfirmationLexicon::add(const std::string& language, const std::vector<std::string>& yes_words,
                              const std::vector<std::string>& no_words) {
  Entry& e = entries_[language];
  for (const auto& w : yes_words) {
    for (auto& t : normalize(w)) {
      all_.yes.insert(t);
      e.yes.insert(std::move(t));
    }
  }
  for (const auto& w : no_words) {
    for (auto& t : normalize(w)) {
      all_.no.insert(t);
      e.no.insert(std::move(t));
    }
  }
}

const ConfirmationLexicon::Entry& ConfirmationLexicon::lookup(std::string_view language) const {
  auto it = entries_.find(language);
  return it == entries_.end() ? all_ : it->second;
}

Confirmation parse_confirmation(const Transcript& transcript, const ConfirmationLexicon& lexicon) {
  const auto& entry = lexicon.lookup(transcript.language());
  bool yes = false;
  bool no = false;
  for (const auto& t : transcript.tokens()) {
    yes = yes || entry.yes.contains(t);
    no = no || entry.no.contains(t);
  }
  if (yes && !no) return Confirmation::Yes;
  if (no && !yes) return Confirmation::No;
  return Confirmation::Unclear;
}

}  // namespace ivr

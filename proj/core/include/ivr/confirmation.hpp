#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ivr/asr.hpp"

namespace ivr {

enum class Confirmation { Yes, No, Unclear };

std::string_view to_string(Confirmation c) noexcept;

/// Per-language yes/no token sets (stored normalized).
class ConfirmationLexicon {
 public:
  struct Entry {
    std::set<std::string, std::less<>> yes;
    std::set<std::string, std::less<>> no;
  };

  /// Words are normalized; multi-token phrases contribute every token.
  void add(const std::string& language, const std::vector<std::string>& yes_words,
           const std::vector<std::string>& no_words);

  using EntryMap = std::map<std::string, Entry, std::less<>>;

  const EntryMap& languages() const noexcept { return entries_; }
  /// Lexicon for `language`, or the union over all languages if unknown.
  const Entry& lookup(std::string_view language) const;

 private:
  EntryMap entries_;
  Entry all_;
};

/// Yes iff some yes-token and no no-token is present; No symmetrically;
/// Unclear otherwise (both, neither, or empty).
Confirmation parse_confirmation(const Transcript& transcript, const ConfirmationLexicon& lexicon);

}  // namespace ivr

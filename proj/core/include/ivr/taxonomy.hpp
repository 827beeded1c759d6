#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ivr/text.hpp"

namespace ivr {

/// One routable problem category.
struct IntentClass {
  std::string class_id;
  std::map<std::string, std::string> display_name;  // language tag -> name
  std::string queue_id;
  TokenList keywords;  // normalized
};

/// Ordered, immutable set of intent classes. File order is preserved because
/// prompts list classes in taxonomy order.
class IntentTaxonomy {
 public:
  IntentTaxonomy() = default;
  /// Throws ConfigError on duplicate or empty class_id, or empty keywords.
  explicit IntentTaxonomy(std::vector<IntentClass> classes);

  const std::vector<IntentClass>& classes() const noexcept { return classes_; }
  const IntentClass* find(std::string_view class_id) const;
  bool contains(std::string_view class_id) const { return find(class_id) != nullptr; }
  std::size_t size() const noexcept { return classes_.size(); }
  bool empty() const noexcept { return classes_.empty(); }

 private:
  std::vector<IntentClass> classes_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace ivr

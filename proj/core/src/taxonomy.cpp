#include "ivr/taxonomy.hpp"

#include "ivr/errors.hpp"

namespace ivr {

IntentTaxonomy::IntentTaxonomy(std::vector<IntentClass> classes) : classes_(std::move(classes)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    const std::string where = "classes[" + std::to_string(i) + "]";
    if (c.class_id.empty()) {
      throw ConfigError("", where + ".class_id", "must be non-empty");
    }
    if (c.keywords.empty()) {
      throw ConfigError("", where + ".keywords", "class '" + c.class_id + "' has no keywords");
    }
    if (!index_.emplace(c.class_id, i).second) {
      throw ConfigError("", where + ".class_id", "duplicate class_id '" + c.class_id + "'");
    }
  }
}

const IntentClass* IntentTaxonomy::find(std::string_view class_id) const {
  auto it = index_.find(std::string(class_id));
  return it == index_.end() ? nullptr : &classes_[it->second];
}

}  // namespace ivr

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ivr {

/// Text with `{name}` placeholders. Required placeholders are checked when the
/// template is parsed, so rendering never fails on a missing slot. Unknown
/// `{...}` sequences are left verbatim.
class TextTemplate {
 public:
  TextTemplate() = default;

  /// Throws TemplateError naming `origin` and the first missing placeholder.
  static TextTemplate parse(std::string text, const std::vector<std::string>& required,
                            std::string origin = "");

  /// Single-pass substitution; substituted values are never re-scanned.
  std::string render(const std::map<std::string, std::string, std::less<>>& values) const;

  const std::string& text() const noexcept { return text_; }
  bool has_placeholder(std::string_view name) const;

 private:
  std::string text_;
};

}  // namespace ivr

#include "ivr/text_template.hpp"

#include "ivr/errors.hpp"

namespace ivr {

TextTemplate TextTemplate::parse(std::string text, const std::vector<std::string>& required,
                                 std::string origin) {
  TextTemplate t;
  t.text_ = std::move(text);
  for (const auto& name : required) {
    if (!t.has_placeholder(name)) {
      throw TemplateError(origin, "template", "missing placeholder {" + name + "}");
    }
  }
  return t;
}

bool TextTemplate::has_placeholder(std::string_view name) const {
  std::string needle;
  needle.reserve(name.size() + 2);
  needle += '{';
  needle += name;
  needle += '}';
  return text_.find(needle) != std::string::npos;
}

std::string TextTemplate::render(
    const std::map<std::string, std::string, std::less<>>& values) const {
  std::string out;
  out.reserve(text_.size());
  std::size_t pos = 0;
  while (pos < text_.size()) {
    const auto open = text_.find('{', pos);
    if (open == std::string::npos) {
      out.append(text_, pos, std::string::npos);
      break;
    }
    out.append(text_, pos, open - pos);
    const auto close = text_.find('}', open + 1);
    if (close == std::string::npos) {
      out.append(text_, open, std::string::npos);
      break;
    }
    const std::string_view name(text_.data() + open + 1, close - open - 1);
    if (auto it = values.find(name); it != values.end()) {
      out += it->second;
      pos = close + 1;
    } else {
      out += '{';
      pos = open + 1;
    }
  }
  return out;
}

}  // namespace ivr

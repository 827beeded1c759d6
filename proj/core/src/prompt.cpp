#include "ivr/prompt.hpp"

namespace ivr {

TextTemplate parse_prompt_template(std::string text, std::string origin) {
  return TextTemplate::parse(std::move(text), {"utterance", "context", "classes"},
                             std::move(origin));
}

std::string build_prompt(const Transcript& transcript, std::span<const KnowledgeDoc> docs,
                         const IntentTaxonomy& taxonomy, const TextTemplate& prompt_template) {
  std::string context;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i > 0) context += '\n';
    context += '[';
    context += docs[i].doc_id;
    context += "] ";
    context += join_tokens(docs[i].tokens);
  }
  std::string classes;
  for (std::size_t i = 0; i < taxonomy.classes().size(); ++i) {
    if (i > 0) classes += '\n';
    classes += "- ";
    classes += taxonomy.classes()[i].class_id;
  }
  return prompt_template.render({
      {"utterance", join_tokens(transcript.tokens())},
      {"context", context},
      {"classes", classes},
  });
}

}  // namespace ivr

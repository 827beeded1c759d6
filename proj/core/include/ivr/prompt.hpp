#pragma once

#include <span>
#include <string>

#include "ivr/asr.hpp"
#include "ivr/retrieval.hpp"
#include "ivr/taxonomy.hpp"
#include "ivr/text_template.hpp"

namespace ivr {

/// Parses a classification prompt template; requires {utterance}, {context}
/// and {classes}. Throws TemplateError otherwise.
TextTemplate parse_prompt_template(std::string text, std::string origin = "");

/// Renders the classification prompt.
///   {utterance} -> normalized tokens joined by single spaces
///   {context}   -> one "[doc_id] text" line per doc (empty when no docs)
///   {classes}   -> one "- class_id" line per class, in taxonomy order
std::string build_prompt(const Transcript& transcript, std::span<const KnowledgeDoc> docs,
                         const IntentTaxonomy& taxonomy, const TextTemplate& prompt_template);

}  // namespace ivr

#include "ivr/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ivr/errors.hpp"
#include "ivr/prompt.hpp"
#include "ivr/tts.hpp"

namespace ivr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), "<document>", std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& obj, const char* key, const fs::path& path,
                    const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(path.string(), where.empty() ? key : where + "." + key, "missing field");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const fs::path& path,
                           const std::string& where) {
  const json& v = require(obj, key, path, where);
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw ConfigError(path.string(), where.empty() ? key : where + "." + key,
                      "must be a non-empty string");
  }
  return v.get<std::string>();
}

std::vector<std::string> string_array(const json& v, const fs::path& path,
                                      const std::string& field) {
  if (!v.is_array()) {
    throw ConfigError(path.string(), field, "must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw ConfigError(path.string(), field, "must be an array of strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& rel) {
  fs::path p(rel);
  return p.is_absolute() ? p : base / p;
}

std::chrono::milliseconds timeout_ms(const json& obj, std::chrono::milliseconds dflt,
                                     const fs::path& path, const std::string& where) {
  if (!obj.contains("timeout_ms")) return dflt;
  const auto& v = obj["timeout_ms"];
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigError(path.string(), where + ".timeout_ms", "must be a positive integer");
  }
  return std::chrono::milliseconds(v.get<long long>());
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const fs::path& path,
                const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(path.string(), where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

AsrBackendConfig parse_asr(const json& j, const fs::path& path) {
  const std::string where = "backends.asr";
  check_keys(j, {"kind", "endpoint", "error_rate", "seed", "timeout_ms"}, path, where);
  const std::string kind = require_string(j, "kind", path, where);
  AsrBackendConfig cfg;
  if (kind == "mock") {
    cfg.kind = AsrBackendConfig::Kind::Mock;
    const json& rate = require(j, "error_rate", path, where);
    const json& seed = require(j, "seed", path, where);
    if (!rate.is_number() || rate.get<double>() < 0.0 || rate.get<double>() > 1.0) {
      throw ConfigError(path.string(), where + ".error_rate", "must be a number in [0, 1]");
    }
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ConfigError(path.string(), where + ".seed", "must be an unsigned integer");
    }
    cfg.error_rate = rate.get<double>();
    cfg.seed = seed.get<std::uint64_t>();
  } else if (kind == "remote") {
    cfg.kind = AsrBackendConfig::Kind::Remote;
    cfg.endpoint = require_string(j, "endpoint", path, where);
  } else {
    throw ConfigError(path.string(), where + ".kind", "must be 'mock' or 'remote'");
  }
  cfg.timeout = timeout_ms(j, cfg.timeout, path, where);
  return cfg;
}

ClassifierBackendConfig parse_classifier(const json& j, const fs::path& path) {
  const std::string where = "backends.classifier";
  check_keys(j, {"kind", "endpoint", "timeout_ms", "max_connections"}, path, where);
  const std::string kind = require_string(j, "kind", path, where);
  ClassifierBackendConfig cfg;
  if (kind == "mock") {
    cfg.kind = ClassifierBackendConfig::Kind::Mock;
  } else if (kind == "remote") {
    cfg.kind = ClassifierBackendConfig::Kind::Remote;
    cfg.endpoint = require_string(j, "endpoint", path, where);
  } else {
    throw ConfigError(path.string(), where + ".kind", "must be 'mock' or 'remote'");
  }
  cfg.timeout = timeout_ms(j, cfg.timeout, path, where);
  if (j.contains("max_connections")) {
    const auto& v = j["max_connections"];
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError(path.string(), where + ".max_connections", "must be >= 1");
    }
    cfg.max_connections = v.get<std::ptrdiff_t>();
  }
  return cfg;
}

TtsBackendConfig parse_tts(const json& j, const fs::path& path) {
  const std::string where = "backends.tts";
  check_keys(j, {"kind", "endpoint", "timeout_ms", "voice"}, path, where);
  const std::string kind = require_string(j, "kind", path, where);
  TtsBackendConfig cfg;
  if (kind == "mock") {
    cfg.kind = TtsBackendConfig::Kind::Mock;
  } else if (kind == "remote") {
    cfg.kind = TtsBackendConfig::Kind::Remote;
    cfg.endpoint = require_string(j, "endpoint", path, where);
  } else {
    throw ConfigError(path.string(), where + ".kind", "must be 'mock' or 'remote'");
  }
  cfg.timeout = timeout_ms(j, cfg.timeout, path, where);
  if (j.contains("voice")) {
    cfg.voice = require_string(j, "voice", path, where);
  }
  return cfg;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path.string(), "<file>", "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IntentTaxonomy load_taxonomy(const fs::path& path) {
  const json doc = parse_json(path);
  if (!doc.is_array()) {
    throw ConfigError(path.string(), "<document>", "taxonomy must be a JSON array");
  }
  std::vector<IntentClass> classes;
  classes.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& c = doc[i];
    const std::string where = "[" + std::to_string(i) + "]";
    IntentClass ic;
    ic.class_id = require_string(c, "class_id", path, where);
    const std::string named = "classes." + ic.class_id;
    ic.queue_id = require_string(c, "queue_id", path, named);
    const json& names = require(c, "display_name", path, named);
    if (!names.is_object()) {
      throw ConfigError(path.string(), named + ".display_name", "must be an object");
    }
    for (const auto& [lang, name] : names.items()) {
      if (!name.is_string()) {
        throw ConfigError(path.string(), named + ".display_name." + lang, "must be a string");
      }
      ic.display_name[lang] = name.get<std::string>();
    }
    for (const auto& kw : string_array(require(c, "keywords", path, named), path,
                                       named + ".keywords")) {
      for (auto& t : normalize(kw)) {
        ic.keywords.push_back(std::move(t));
      }
    }
    if (ic.keywords.empty()) {
      throw ConfigError(path.string(), named + ".keywords",
                        "class '" + ic.class_id + "' has no usable keywords");
    }
    classes.push_back(std::move(ic));
  }
  try {
    return IntentTaxonomy(std::move(classes));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string(), e.field(), e.what());
  }
}

KnowledgeStore load_knowledge_base(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<KnowledgeDoc> docs;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> ids;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string(), where, std::string("invalid JSON: ") + e.what());
    }
    const std::string id = require_string(j, "doc_id", path, where);
    if (!ids.insert(id).second) {
      throw ConfigError(path.string(), where + ".doc_id", "duplicate doc_id '" + id + "'");
    }
    const json& body = require(j, "text", path, where);
    if (!body.is_string()) {
      throw ConfigError(path.string(), where + ".text", "must be a string");
    }
    std::optional<std::string> hint;
    if (j.contains("class_hint") && !j["class_hint"].is_null()) {
      hint = require_string(j, "class_hint", path, where);
    }
    docs.push_back(KnowledgeDoc::make(id, body.get<std::string>(), std::move(hint)));
  }
  return KnowledgeStore(std::move(docs));
}

RoutingTable load_routing(const fs::path& path, const IntentTaxonomy& taxonomy) {
  const json doc = parse_json(path);
  check_keys(doc, {"operator_queue", "queues"}, path, "");
  const std::string op = require_string(doc, "operator_queue", path, "");
  std::set<std::string> queues;
  for (auto& q : string_array(require(doc, "queues", path, ""), path, "queues")) {
    if (q.empty()) {
      throw ConfigError(path.string(), "queues", "queue ids must be non-empty");
    }
    queues.insert(std::move(q));
  }
  return RoutingTable::build(taxonomy, std::move(queues), op, path.string());
}

ConfirmationLexicon load_lexicon(const fs::path& path) {
  const json doc = parse_json(path);
  if (!doc.is_object() || doc.empty()) {
    throw ConfigError(path.string(), "<document>", "lexicon must be a non-empty object");
  }
  ConfirmationLexicon lex;
  for (const auto& [lang, entry] : doc.items()) {
    check_keys(entry, {"yes", "no"}, path, lang);
    auto yes = string_array(require(entry, "yes", path, lang), path, lang + ".yes");
    auto no = string_array(require(entry, "no", path, lang), path, lang + ".no");
    if (yes.empty() || no.empty()) {
      throw ConfigError(path.string(), lang, "yes and no lists must be non-empty");
    }
    lex.add(lang, yes, no);
  }
  return lex;
}

std::map<std::string, PromptSet, std::less<>> load_prompts(const fs::path& path) {
  const json doc = parse_json(path);
  if (!doc.is_object() || doc.empty()) {
    throw ConfigError(path.string(), "<document>", "prompts must be a non-empty object");
  }
  std::map<std::string, PromptSet, std::less<>> out;
  for (const auto& [lang, entry] : doc.items()) {
    check_keys(entry, {"greeting", "confirm", "reask"}, path, lang);
    PromptSet set;
    set.greeting = TextTemplate::parse(require_string(entry, "greeting", path, lang), {});
    set.reask = TextTemplate::parse(require_string(entry, "reask", path, lang), {});
    try {
      set.confirm = parse_confirmation_template(require_string(entry, "confirm", path, lang));
    } catch (const TemplateError&) {
      throw TemplateError(path.string(), lang + ".confirm", "missing placeholder {class_name}");
    }
    out.emplace(lang, std::move(set));
  }
  return out;
}

const PromptSet& EngineConfig::prompts_for(std::string_view language) const {
  if (auto it = prompts.find(language); it != prompts.end()) {
    return it->second;
  }
  if (auto it = prompts.find(default_language); it != prompts.end()) {
    return it->second;
  }
  throw ConfigError(source.string(), "prompts", "no prompts for '" + std::string(language) + "'");
}

void EngineConfig::validate() const {
  const std::string path = source.string();
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw ConfigError(path, "confidence_threshold", "must be within [0, 1]");
  }
  if (max_confirm_attempts < 1) {
    throw ConfigError(path, "max_confirm_attempts", "must be >= 1");
  }
  if (rag_k < 1) {
    throw ConfigError(path, "rag_k", "must be >= 1");
  }
  try {
    asr.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path, "backends." + e.field(), e.what());
  }
  if (classifier.kind == ClassifierBackendConfig::Kind::Remote &&
      (!classifier.endpoint || classifier.endpoint->empty())) {
    throw ConfigError(path, "backends.classifier.endpoint", "remote classifier needs an endpoint");
  }
  if (tts.kind == TtsBackendConfig::Kind::Remote && (!tts.endpoint || tts.endpoint->empty())) {
    throw ConfigError(path, "backends.tts.endpoint", "remote tts needs an endpoint");
  }
  if (taxonomy.empty()) {
    throw ConfigError(path, "taxonomy", "taxonomy has no classes");
  }
  for (const auto& c : taxonomy.classes()) {
    auto it = routing.routes().find(c.class_id);
    if (it == routing.routes().end() || !routing.has_queue(c.queue_id)) {
      throw ConfigError(path, "routing",
                        "class '" + c.class_id + "' has no route to queue '" + c.queue_id + "'");
    }
  }
  if (routing.operator_queue().empty()) {
    throw ConfigError(path, "routing.operator_queue", "must be non-empty");
  }
  for (const auto& d : knowledge.docs()) {
    if (d.class_hint && !taxonomy.contains(*d.class_hint)) {
      throw ConfigError(path, "knowledge_base",
                        "doc '" + d.doc_id + "' hints unknown class '" + *d.class_hint + "'");
    }
  }
  for (const char* slot : {"utterance", "context", "classes"}) {
    if (!classify_prompt.has_placeholder(slot)) {
      throw TemplateError(path, "classify_prompt", std::string("missing placeholder {") + slot + "}");
    }
  }
  if (!prompts.contains(default_language)) {
    throw ConfigError(path, "default_language",
                      "no prompts for default language '" + default_language + "'");
  }
  for (const auto& [lang, set] : prompts) {
    if (!set.confirm.has_placeholder("class_name")) {
      throw TemplateError(path, "prompts." + lang + ".confirm", "missing placeholder {class_name}");
    }
  }
  if (lexicon.languages().empty()) {
    throw ConfigError(path, "lexicon", "confirmation lexicon is empty");
  }
}

EngineConfig load_config(const fs::path& path) {
  const json doc = parse_json(path);
  if (!doc.is_object()) {
    throw ConfigError(path.string(), "<document>", "config must be a JSON object");
  }
  check_keys(doc,
             {"confidence_threshold", "max_confirm_attempts", "rag_k", "seed", "default_language",
              "taxonomy", "routing", "knowledge_base", "classify_prompt", "prompts", "lexicon",
              "call_log", "bind", "backends"},
             path, "");
  const fs::path base = path.parent_path();
  EngineConfig cfg;
  cfg.source = path;

  if (doc.contains("confidence_threshold")) {
    const auto& v = doc["confidence_threshold"];
    if (!v.is_number()) {
      throw ConfigError(path.string(), "confidence_threshold", "must be a number");
    }
    cfg.confidence_threshold = v.get<double>();
  }
  if (doc.contains("max_confirm_attempts")) {
    const auto& v = doc["max_confirm_attempts"];
    if (!v.is_number_integer()) {
      throw ConfigError(path.string(), "max_confirm_attempts", "must be an integer");
    }
    cfg.max_confirm_attempts = v.get<int>();
  }
  if (doc.contains("rag_k")) {
    const auto& v = doc["rag_k"];
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError(path.string(), "rag_k", "must be an integer >= 1");
    }
    cfg.rag_k = v.get<std::size_t>();
  }
  if (doc.contains("seed")) {
    const auto& v = doc["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(path.string(), "seed", "must be an unsigned integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("default_language")) {
    cfg.default_language = require_string(doc, "default_language", path, "");
  }
  if (doc.contains("bind")) {
    cfg.bind_address = require_string(doc, "bind", path, "");
  }
  if (doc.contains("call_log")) {
    cfg.call_log = resolve(base, require_string(doc, "call_log", path, ""));
  }

  const json& backends = require(doc, "backends", path, "");
  check_keys(backends, {"asr", "classifier", "tts"}, path, "backends");
  cfg.asr = parse_asr(require(backends, "asr", path, "backends"), path);
  cfg.classifier = parse_classifier(require(backends, "classifier", path, "backends"), path);
  cfg.tts = parse_tts(require(backends, "tts", path, "backends"), path);

  cfg.taxonomy = load_taxonomy(resolve(base, require_string(doc, "taxonomy", path, "")));
  cfg.routing = load_routing(resolve(base, require_string(doc, "routing", path, "")), cfg.taxonomy);
  cfg.knowledge = load_knowledge_base(resolve(base, require_string(doc, "knowledge_base", path, "")));
  const fs::path prompt_path = resolve(base, require_string(doc, "classify_prompt", path, ""));
  cfg.classify_prompt = parse_prompt_template(read_file(prompt_path), prompt_path.string());
  cfg.prompts = load_prompts(resolve(base, require_string(doc, "prompts", path, "")));
  cfg.lexicon = load_lexicon(resolve(base, require_string(doc, "lexicon", path, "")));

  cfg.validate();
  return cfg;
}

}  // namespace ivr

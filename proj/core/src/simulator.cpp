#include "ivr/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "ivr/call_log.hpp"
#include "ivr/errors.hpp"
#include "ivr/rng.hpp"
#include "json_io.hpp"

namespace ivr::sim {

namespace fs = std::filesystem;
using detail::ojson;

namespace {

Scenario scenario_from_json(const ojson& j, const std::string& origin, std::size_t index) {
  const std::string where = "scenarios[" + std::to_string(index) + "]";
  if (!j.is_object()) {
    throw ConfigError(origin, where, "expected an object");
  }
  auto str = [&](const char* key, bool required) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) throw ConfigError(origin, where + "." + key, "missing");
      return std::nullopt;
    }
    if (!it->is_string()) throw ConfigError(origin, where + "." + key, "expected a string");
    return it->get<std::string>();
  };
  static const std::set<std::string> known = {"scenario_id", "language", "steps",
                                              "expected_class", "expected_terminal"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(origin, where + "." + key, "unknown key");
  }

  Scenario s;
  s.scenario_id = *str("scenario_id", true);
  s.language = *str("language", true);
  s.expected_class = str("expected_class", false);
  const std::string terminal = *str("expected_terminal", true);
  const auto phase = parse_phase(terminal);
  if (!phase || !is_terminal(*phase)) {
    throw ConfigError(origin, where + ".expected_terminal", "not a terminal phase: " + terminal);
  }
  s.expected_terminal = *phase;

  auto steps = j.find("steps");
  if (steps == j.end() || !steps->is_array()) {
    throw ConfigError(origin, where + ".steps", "expected an array");
  }
  for (std::size_t k = 0; k < steps->size(); ++k) {
    const auto& st = (*steps)[k];
    const std::string field = where + ".steps[" + std::to_string(k) + "]";
    if (!st.is_object() || st.size() != 1) {
      throw ConfigError(origin, field, "expected {\"utterance\"|\"reply\"|\"hangup\": ...}");
    }
    const auto& [key, value] = *st.items().begin();
    if (key == "hangup") {
      s.steps.push_back({StepKind::Hangup, ""});
      continue;
    }
    if (!value.is_string()) throw ConfigError(origin, field + "." + key, "expected a string");
    if (key == "utterance") {
      s.steps.push_back({StepKind::Utterance, value.get<std::string>()});
    } else if (key == "reply") {
      s.steps.push_back({StepKind::Reply, value.get<std::string>()});
    } else {
      throw ConfigError(origin, field + "." + key, "unknown step kind");
    }
  }
  return s;
}

bool is_scenario_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".json" || ext == ".jsonl";
}

std::vector<Scenario> load_file(const fs::path& path) {
  const std::string text = read_file(path);
  if (path.extension() != ".jsonl") {
    return parse_scenarios(text, path.string());
  }
  std::vector<Scenario> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    ++line_no;
    const std::string_view line(text.data() + start, nl - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      ojson j;
      try {
        j = ojson::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string(), "line " + std::to_string(line_no), e.what());
      }
      out.push_back(scenario_from_json(j, path.string(), out.size()));
    }
    start = nl + 1;
  }
  return out;
}

std::string format_rate(double rate) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, rate);
  return std::string(buf, ptr);
}

}  // namespace

void Scenario::validate(const IntentTaxonomy& taxonomy, const std::string& origin) const {
  const std::string where = "scenario '" + scenario_id + "'";
  if (scenario_id.empty()) throw ConfigError(origin, "scenario_id", "must not be empty");
  if (language.empty()) throw ConfigError(origin, where + ".language", "must not be empty");
  const bool has_utterance = std::any_of(steps.begin(), steps.end(), [](const ScenarioStep& s) {
    return s.kind == StepKind::Utterance;
  });
  if (!has_utterance) throw ConfigError(origin, where + ".steps", "needs at least one utterance");
  if (!is_terminal(expected_terminal)) {
    throw ConfigError(origin, where + ".expected_terminal", "not a terminal phase");
  }
  if (expected_terminal == Phase::Routed && !expected_class) {
    throw ConfigError(origin, where + ".expected_class", "required when expecting Routed");
  }
  if (expected_class && !taxonomy.contains(*expected_class)) {
    throw ConfigError(origin, where + ".expected_class", "unknown class '" + *expected_class + "'");
  }
}

std::vector<Scenario> parse_scenarios(std::string_view json_text, const std::string& origin) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin, "", e.what());
  }
  std::vector<Scenario> out;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(scenario_from_json(j[k], origin, k));
  } else {
    out.push_back(scenario_from_json(j, origin, 0));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const fs::path& path) {
  std::vector<Scenario> all;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && is_scenario_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto part = load_file(f);
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
  } else {
    all = load_file(path);
  }
  if (all.empty()) throw ConfigError(path.string(), "", "no scenarios found");
  std::sort(all.begin(), all.end(),
            [](const Scenario& a, const Scenario& b) { return a.scenario_id < b.scenario_id; });
  for (std::size_t k = 1; k < all.size(); ++k) {
    if (all[k].scenario_id == all[k - 1].scenario_id) {
      throw ConfigError(path.string(), "scenario_id", "duplicate '" + all[k].scenario_id + "'");
    }
  }
  return all;
}

std::string batch_call_id(const std::string& scenario_id, std::uint64_t seed, double rate) {
  return scenario_id + "@" + std::to_string(seed) + "@" + format_rate(rate);
}

SessionReport run_scenario(const Scenario& scenario, const Engine& engine,
                           const RunOptions& options) {
  SessionReport rep;
  rep.scenario_id = scenario.scenario_id;
  rep.call_id = options.call_id.value_or(scenario.scenario_id);
  rep.expected_class = scenario.expected_class;
  rep.expected_terminal = scenario.expected_terminal;

  const std::uint64_t session_seed = mix_seed(options.seed, fnv1a64(scenario.scenario_id));
  auto trace = [&](const CallSession& s, std::size_t from) {
    for (std::size_t k = from; k < s.event_log.size(); ++k) {
      const auto& rec = s.event_log[k];
      for (const auto& a : rec.actions) {
        rep.action_trace.push_back(std::string(event_name(rec.event)) + " -> " +
                                   std::string(action_name(a)));
      }
    }
  };

  Engine::Step step = engine.start(rep.call_id, scenario.language, session_seed);
  CallSession session = std::move(step.session);
  trace(session, 0);
  std::size_t utterances = 0;
  for (const auto& st : scenario.steps) {
    if (session.terminal()) break;
    ++rep.steps_used;
    const std::size_t logged = session.event_log.size();
    if (st.kind == StepKind::Hangup) {
      step = engine.hangup(std::move(session));
    } else {
      step = engine.utterance(std::move(session), UtteranceInput::audio(st.text), utterances++);
      TokenList ref = normalize(st.text);
      if (step.transcript && !ref.empty()) {
        rep.wer_pairs.emplace_back(std::move(ref), step.transcript->tokens());
      }
    }
    session = std::move(step.session);
    trace(session, logged);
  }
  if (!session.terminal()) {
    throw ScenarioUnderrunError("scenario '" + scenario.scenario_id + "' ran out of steps in " +
                                std::string(to_string(session.phase)));
  }
  rep.terminal = session.phase;
  if (session.last_classification) rep.classified_as = session.last_classification->class_id;
  rep.log = std::move(session.event_log);
  return rep;
}

SessionReport run_scenario(const Scenario& scenario, std::shared_ptr<const EngineConfig> config,
                           const RunOptions& options) {
  Engine::Options eo;
  eo.asr_override = AsrBackendConfig::mock(options.error_rate, options.seed);
  eo.clock = &Engine::logical_clock;
  const Engine engine(std::move(config), std::move(eo));
  return run_scenario(scenario, engine, options);
}

BatchReport run_batch(const std::vector<Scenario>& scenarios,
                      std::shared_ptr<const EngineConfig> config, const BatchOptions& options) {
  if (scenarios.empty()) throw ConfigError("run_batch needs at least one scenario");
  if (options.seeds.empty()) throw ConfigError("run_batch needs at least one seed");
  if (options.error_rates.empty()) throw ConfigError("run_batch needs at least one error rate");

  std::vector<const Scenario*> ordered;
  for (const auto& s : scenarios) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const Scenario* a, const Scenario* b) { return a->scenario_id < b->scenario_id; });

  std::vector<Engine> engines;
  engines.reserve(options.error_rates.size());
  for (double rate : options.error_rates) {
    Engine::Options eo;
    eo.asr_override = AsrBackendConfig::mock(rate, 0);
    eo.clock = options.timestamps ? Engine::Clock(&Engine::wall_clock)
                                  : Engine::Clock(&Engine::logical_clock);
    engines.emplace_back(config, std::move(eo));
  }

  struct Job {
    std::size_t rate;
    std::uint64_t seed;
    const Scenario* scenario;
  };
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < options.error_rates.size(); ++r) {
    for (std::uint64_t seed : options.seeds) {
      for (const Scenario* s : ordered) jobs.push_back({r, seed, s});
    }
  }

  struct Outcome {
    std::optional<SessionReport> report;
    std::string error;
  };
  std::vector<Outcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      const Job& job = jobs[k];
      RunOptions ro;
      ro.error_rate = options.error_rates[job.rate];
      ro.seed = job.seed;
      ro.call_id = batch_call_id(job.scenario->scenario_id, job.seed, ro.error_rate);
      try {
        results[k].report = run_scenario(*job.scenario, engines[job.rate], ro);
      } catch (const std::exception& e) {
        results[k].error = e.what();
      }
    }
  };
  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  BatchReport out;
  out.scenarios = ordered.size();
  out.seeds = options.seeds;
  if (options.timestamps) out.generated_at = format_rfc3339(Engine::wall_clock());

  std::size_t k = 0;
  for (std::size_t r = 0; r < options.error_rates.size(); ++r) {
    RateReport rr;
    rr.error_rate = options.error_rates[r];
    std::vector<SessionOutcome> outcomes;
    std::vector<TokenPair> pairs;
    const std::size_t end = k + options.seeds.size() * ordered.size();
    for (; k < end; ++k) {
      const auto& res = results[k];
      if (!res.report) {
        rr.failures.push_back({jobs[k].scenario->scenario_id, jobs[k].seed, res.error});
        continue;
      }
      const SessionReport& sr = *res.report;
      outcomes.push_back({sr.call_id, sr.terminal, sr.classified_as, sr.expected_class});
      pairs.insert(pairs.end(), sr.wer_pairs.begin(), sr.wer_pairs.end());
      if (!sr.matches_expectation()) ++rr.expectation_mismatches;
      if (options.log != nullptr) {
        for (const auto& rec : sr.log) options.log->append(sr.call_id, rec);
      }
    }
    rr.report = build_report(outcomes, pairs, rr.failures.size());
    out.rates.push_back(std::move(rr));
  }
  if (options.log != nullptr) options.log->flush();
  return out;
}

std::string to_json(const BatchReport& report, int indent) {
  ojson j;
  if (report.generated_at) j["generated_at"] = *report.generated_at;
  j["scenarios"] = report.scenarios;
  j["seeds"] = report.seeds;
  ojson runs = ojson::array();
  for (const auto& rr : report.rates) {
    ojson r;
    r["error_rate"] = rr.error_rate;
    r["report"] = detail::to_ojson(rr.report);
    r["expectation_mismatches"] = rr.expectation_mismatches;
    ojson failures = ojson::array();
    for (const auto& f : rr.failures) {
      failures.push_back({{"scenario_id", f.scenario_id}, {"seed", f.seed}, {"error", f.error}});
    }
    r["failures"] = std::move(failures);
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  return j.dump(indent) + "\n";
}

std::string to_json(const SessionReport& report, int indent) {
  ojson j;
  j["scenario_id"] = report.scenario_id;
  j["call_id"] = report.call_id;
  j["terminal"] = std::string(to_string(report.terminal));
  j["classified_as"] = report.classified_as ? ojson(*report.classified_as) : ojson(nullptr);
  j["expected_class"] = report.expected_class ? ojson(*report.expected_class) : ojson(nullptr);
  j["expected_terminal"] = std::string(to_string(report.expected_terminal));
  j["matches_expectation"] = report.matches_expectation();
  j["steps_used"] = report.steps_used;
  j["actions"] = report.action_trace;
  j["wer"] = detail::to_ojson(corpus_wer(report.wer_pairs));
  return j.dump(indent) + "\n";
}

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

CorpusWer eval_asr(const fs::path& ref_file, const fs::path& hyp_file) {
  const auto refs = read_lines(ref_file);
  const auto hyps = read_lines(hyp_file);
  if (refs.size() != hyps.size()) {
    throw InputError("line count mismatch: " + ref_file.string() + " has " +
                     std::to_string(refs.size()) + " lines, " + hyp_file.string() + " has " +
                     std::to_string(hyps.size()));
  }
  std::vector<TokenPair> pairs;
  pairs.reserve(refs.size());
  for (std::size_t k = 0; k < refs.size(); ++k) pairs.emplace_back(normalize(refs[k]), normalize(hyps[k]));
  return corpus_wer(pairs);
}

CorpusWer eval_asr_tsv(const fs::path& tsv_file) {
  const auto lines = read_lines(tsv_file);
  std::vector<TokenPair> pairs;
  pairs.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto tab = lines[k].find('\t');
    if (tab == std::string::npos) {
      throw InputError(tsv_file.string() + ": line " + std::to_string(k + 1) + " has no tab");
    }
    pairs.emplace_back(normalize(std::string_view(lines[k]).substr(0, tab)),
                       normalize(std::string_view(lines[k]).substr(tab + 1)));
  }
  return corpus_wer(pairs);
}

}  // namespace ivr::sim

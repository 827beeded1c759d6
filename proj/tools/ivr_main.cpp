// ivr: run the bridge, replay scenarios, run seeded batches, score ASR output.
//
// Exit codes: 0 success, 1 usage/config/input error, 2 runtime error.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivr/bridge_server.hpp"
#include "ivr/config.hpp"
#include "ivr/engine.hpp"
#include "ivr/errors.hpp"
#include "ivr/simulator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

struct Common {
  std::string config;
  std::string out;
  std::string log;
};

std::shared_ptr<const ivr::EngineConfig> load(const Common& c) {
  std::string path = c.config;
  if (path.empty()) {
    if (const char* env = std::getenv("IVR_CONFIG")) path = env;
  }
  if (path.empty()) {
    throw ivr::ConfigError("", "--config", "no config given (use --config or IVR_CONFIG)");
  }
  return std::make_shared<const ivr::EngineConfig>(ivr::load_config(path));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ivr::InputError("cannot write " + c.out);
  f << text;
  if (!f.flush()) throw ivr::InputError("failed writing " + c.out);
}

std::unique_ptr<ivr::CallLogWriter> open_log(const Common& c, const ivr::EngineConfig& cfg) {
  if (!c.log.empty()) return std::make_unique<ivr::CallLogWriter>(c.log);
  if (cfg.call_log) return std::make_unique<ivr::CallLogWriter>(*cfg.call_log);
  return nullptr;
}

int cmd_serve(const Common& c, const std::string& bind_flag, std::size_t threads) {
  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  auto cfg = load(c);
  std::string bind = cfg->bind_address;
  if (const char* env = std::getenv("IVR_BIND_ADDR"); env && *env) bind = env;
  if (!bind_flag.empty()) bind = bind_flag;
  const auto endpoint = ivr::bridge::parse_endpoint(bind);

  auto log = open_log(c, *cfg);
  ivr::Engine::Options opts;
  opts.log = log.get();
  const ivr::Engine engine(cfg, std::move(opts));
  ivr::bridge::BridgeServer server(engine, endpoint, threads);
  server.start();
  std::cerr << "ivr: listening on " << endpoint.host << ":" << server.port() << std::endl;

  int sig = 0;
  sigwait(&sigs, &sig);
  std::cerr << "ivr: signal " << sig << ", shutting down" << std::endl;
  server.stop();
  if (log) log->flush();
  return kOk;
}

int cmd_run_scenario(const Common& c, const std::string& file, std::optional<std::uint64_t> seed,
                     std::optional<double> rate) {
  auto cfg = load(c);
  const auto scenarios = ivr::sim::load_scenarios(file);
  for (const auto& s : scenarios) s.validate(cfg->taxonomy, file);

  auto log = open_log(c, *cfg);
  ivr::Engine::Options eo;
  const double r = rate.value_or(cfg->asr.error_rate);
  eo.asr_override = ivr::AsrBackendConfig::mock(r, 0);
  eo.log = log.get();
  const ivr::Engine engine(cfg, std::move(eo));

  ivr::sim::RunOptions ro;
  ro.error_rate = r;
  ro.seed = seed.value_or(cfg->seed);
  std::string text;
  if (scenarios.size() == 1) {
    text = ivr::sim::to_json(ivr::sim::run_scenario(scenarios.front(), engine, ro));
  } else {
    text = "[\n";
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      text += ivr::sim::to_json(ivr::sim::run_scenario(scenarios[k], engine, ro));
      text.insert(text.size() - 1, k + 1 < scenarios.size() ? "," : "");
    }
    text += "]\n";
  }
  emit(c, text);
  return kOk;
}

int cmd_run_batch(const Common& c, const std::string& path, std::vector<std::uint64_t> seeds,
                  std::vector<double> rates, bool no_timestamps, std::size_t threads) {
  auto cfg = load(c);
  const auto scenarios = ivr::sim::load_scenarios(path);
  for (const auto& s : scenarios) s.validate(cfg->taxonomy, path);

  std::unique_ptr<ivr::CallLogWriter> log;
  if (!c.log.empty()) log = std::make_unique<ivr::CallLogWriter>(c.log);

  ivr::sim::BatchOptions bo;
  bo.seeds = seeds.empty() ? std::vector<std::uint64_t>{cfg->seed} : std::move(seeds);
  bo.error_rates = rates.empty() ? std::vector<double>{cfg->asr.error_rate} : std::move(rates);
  bo.threads = threads;
  bo.timestamps = !no_timestamps;
  bo.log = log.get();
  const auto report = ivr::sim::run_batch(scenarios, cfg, bo);
  emit(c, ivr::sim::to_json(report));
  return kOk;
}

int cmd_eval_asr(const Common& c, const std::string& ref, const std::string& hyp,
                 const std::string& tsv) {
  ivr::CorpusWer wer;
  if (!tsv.empty()) {
    if (!ref.empty() || !hyp.empty()) {
      throw ivr::InputError("give either --tsv or REF HYP, not both");
    }
    wer = ivr::sim::eval_asr_tsv(tsv);
  } else {
    if (ref.empty() || hyp.empty()) throw ivr::InputError("need REF and HYP files (or --tsv)");
    wer = ivr::sim::eval_asr(ref, hyp);
  }
  emit(c, ivr::to_json(wer));
  return kOk;
}

int cmd_validate(const Common& c) {
  auto cfg = load(c);
  std::cout << "ok: " << cfg->source.string() << ": " << cfg->taxonomy.size() << " classes, "
            << cfg->routing.queues().size() << " queues, " << cfg->knowledge.size()
            << " knowledge docs, languages";
  for (const auto& [lang, _] : cfg->prompts) std::cout << " " << lang;
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IVR orchestration engine: bridge service, scenario simulator, WER scoring"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config, "engine config JSON (default: $IVR_CONFIG)");

  auto* serve = app.add_subcommand("serve", "run the NDJSON bridge service");
  std::string bind;
  std::size_t serve_threads = 0;
  serve->add_option("--bind", bind, "host:port (overrides $IVR_BIND_ADDR and the config)");
  serve->add_option("--threads", serve_threads, "worker threads (0: one per core)");
  serve->add_option("--log", common.log, "call log NDJSON (overrides config call_log)");

  auto* scen = app.add_subcommand("run-scenario", "replay scripted scenarios, print reports");
  std::string scen_file;
  std::optional<std::uint64_t> scen_seed;
  std::optional<double> scen_rate;
  scen->add_option("scenario", scen_file, "scenario .json/.jsonl file or directory")->required();
  scen->add_option("--seed", scen_seed, "batch seed (default: config seed)");
  scen->add_option("--error-rate", scen_rate, "mock ASR error rate")->check(CLI::Range(0.0, 1.0));
  scen->add_option("--out", common.out, "write the report here instead of stdout");
  scen->add_option("--log", common.log, "call log NDJSON (overrides config call_log)");

  auto* batch = app.add_subcommand("run-batch", "run scenarios x seeds x error rates");
  std::string batch_path;
  std::vector<std::uint64_t> seeds;
  std::vector<double> rates;
  bool no_timestamps = false;
  std::size_t batch_threads = 0;
  batch->add_option("scenarios", batch_path, "scenario directory or file")->required();
  batch->add_option("--seed", seeds, "seed (repeatable)")->allow_extra_args(false);
  batch->add_option("--error-rate", rates, "error rate (repeatable)")
      ->check(CLI::Range(0.0, 1.0))
      ->allow_extra_args(false);
  batch->add_option("--out", common.out, "write the report here instead of stdout");
  batch->add_option("--log", common.log, "write per-call NDJSON logs here");
  batch->add_option("--threads", batch_threads, "worker threads (0: one per core)");
  batch->add_flag("--no-timestamps", no_timestamps, "omit wall-clock values for golden output");

  auto* eval = app.add_subcommand("eval-asr", "corpus WER of line-aligned files");
  std::string ref_file, hyp_file, tsv_file;
  eval->add_option("ref", ref_file, "reference transcripts, one per line");
  eval->add_option("hyp", hyp_file, "hypothesis transcripts, one per line");
  eval->add_option("--tsv", tsv_file, "single file of reference<TAB>hypothesis lines");
  eval->add_option("--out", common.out, "write the report here instead of stdout");

  auto* validate = app.add_subcommand("validate-config", "load and check a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (serve->parsed()) return cmd_serve(common, bind, serve_threads);
    if (scen->parsed()) return cmd_run_scenario(common, scen_file, scen_seed, scen_rate);
    if (batch->parsed()) {
      return cmd_run_batch(common, batch_path, seeds, rates, no_timestamps, batch_threads);
    }
    if (eval->parsed()) return cmd_eval_asr(common, ref_file, hyp_file, tsv_file);
    if (validate->parsed()) return cmd_validate(common);
  } catch (const ivr::ConfigError& e) {
    std::cerr << "ivr: config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ivr::InputError& e) {
    std::cerr << "ivr: input error: " << e.what() << "\n";
    return kUsage;
  } catch (const ivr::EmptyReferenceError& e) {
    std::cerr << "ivr: input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "ivr: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

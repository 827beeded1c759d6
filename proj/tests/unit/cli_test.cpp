#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>

#include <json.hpp>

#include "test_support.hpp"

using namespace ivr;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  support::TempDir dir;
  const auto out = dir / "stdout";
  const auto err = dir / "stderr";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + IVR_CLI_PATH + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = support::slurp(out);
  r.err = support::slurp(err);
  return r;
}

std::string config_arg() { return std::string("--config '") + IVR_DEFAULT_CONFIG + "'"; }

std::string fixture_config_arg() {
  return "--config '" + (support::fixture200() / "engine.json").string() + "'";
}

}  // namespace

TEST(Cli, ValidateConfigReportsSummary) {
  const auto r = run_cli(config_arg() + " validate-config");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("ok: ", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("12 classes"), std::string::npos) << r.out;
}

TEST(Cli, ConfigFromEnvironment) {
  const auto r = run_cli("validate-config", std::string("IVR_CONFIG='") + IVR_DEFAULT_CONFIG + "'");
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, MissingConfigIsUsageError) {
  EXPECT_EQ(run_cli("validate-config", "env -u IVR_CONFIG").code, 1);
  const auto r = run_cli("--config /nonexistent/engine.json validate-config");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/nonexistent/engine.json"), std::string::npos) << r.err;
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run_cli(config_arg() + " frobnicate").code, 1);
  EXPECT_EQ(run_cli(config_arg() + " run-batch").code, 1);
  EXPECT_EQ(run_cli(config_arg() + " run-batch x --error-rate 1.5").code, 1);
}

TEST(Cli, EvalAsrScoresFiles) {
  support::TempDir dir;
  support::spit(dir / "ref.txt", "a b c d\ne f\n");
  support::spit(dir / "hyp.txt", "a x c\ne f\n");
  const auto r = run_cli("eval-asr '" + (dir / "ref.txt").string() + "' '" + (dir / "hyp.txt").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j.at("corpus_wer").get<double>(), 2.0 / 6.0);
}

TEST(Cli, EvalAsrLineMismatchIsInputError) {
  support::TempDir dir;
  support::spit(dir / "ref.txt", "a\nb\n");
  support::spit(dir / "hyp.txt", "a\n");
  const auto r = run_cli("eval-asr '" + (dir / "ref.txt").string() + "' '" + (dir / "hyp.txt").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, EvalAsrEmptyReferenceIsInputError) {
  support::TempDir dir;
  support::spit(dir / "pairs.tsv", "a b\ta b\n\tx\n");
  EXPECT_EQ(run_cli("eval-asr --tsv '" + (dir / "pairs.tsv").string() + "'").code, 1);
}

TEST(Cli, RunScenarioUnderrunIsRuntimeError) {
  support::TempDir dir;
  support::spit(dir / "s.json",
                R"({"scenario_id":"short","language":"kk","steps":[{"utterance":"мен картамды жоғалттым"}],)"
                R"("expected_class":"card_lost","expected_terminal":"Routed"})");
  const auto r = run_cli(config_arg() + " run-scenario '" + (dir / "s.json").string() + "'");
  EXPECT_EQ(r.code, 2) << r.out << r.err;
}

TEST(Cli, RunScenarioPrintsReport) {
  support::TempDir dir;
  support::spit(dir / "s.json",
                R"({"scenario_id":"ok","language":"kk","steps":[{"utterance":"мен картамды жоғалттым"},)"
                R"({"reply":"иә"},{"reply":"иә"}],"expected_class":"card_lost","expected_terminal":"Routed"})");
  const auto r = run_cli(config_arg() + " run-scenario '" + (dir / "s.json").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"Routed\""), std::string::npos) << r.out;
}

TEST(Cli, RunBatchIsByteIdentical) {
  support::TempDir dir;
  const std::string base = fixture_config_arg() + " run-batch '" + (support::fixture200() / "scenarios").string() +
                           "' --seed 1 --seed 2 --error-rate 0 --error-rate 0.2 --no-timestamps";
  const auto a = run_cli(base + " --threads 1 --out '" + (dir / "a.json").string() + "' --log '" +
                         (dir / "a.ndjson").string() + "'");
  const auto b = run_cli(base + " --threads 4 --out '" + (dir / "b.json").string() + "' --log '" +
                         (dir / "b.ndjson").string() + "'");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(support::slurp(dir / "a.json"), support::slurp(dir / "b.json"));
  EXPECT_EQ(support::slurp(dir / "a.ndjson"), support::slurp(dir / "b.ndjson"));
  const auto j = nlohmann::json::parse(support::slurp(dir / "a.json"));
  EXPECT_FALSE(j.contains("generated_at"));
  EXPECT_EQ(j.at("runs").size(), 2u);
}

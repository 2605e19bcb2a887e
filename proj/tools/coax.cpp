/*
 * Copyright 2026 The CoAX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line entry point: simulation, fitting, proxy comparison, hypothesis
// studies, reports, the study service and explanation export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coax/common/error.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/experiment/hypotheses.hpp"
#include "coax/experiment/report.hpp"
#include "coax/experiment/studies.hpp"
#include "coax/fitting/population.hpp"
#include "coax/fitting/session_fit.hpp"
#include "coax/proxies/proxy.hpp"
#include "coax/service/http_server.hpp"
#include "coax/service/study_service.hpp"

namespace {

using namespace coax;
namespace fs = std::filesystem;

struct EnvOptions {
  std::string dataset = "wine";
  std::string explainer = "shapley";
  std::string csv;
  size_t attributes = 5;
  uint64_t seed = 1;

  void Add(CLI::App* app) {
    app->add_option("--dataset", dataset, "wine, adult, forest or synthetic");
    app->add_option("--explainer", explainer, "shapley, lime, integrated_gradients, input_gradients");
    app->add_option("--csv", csv, "load rows from a CSV table instead of the synthetic task");
    app->add_option("--attributes", attributes, "attribute count for the synthetic dataset");
    app->add_option("--env-seed", seed, "seed for the model and stimulus pool");
  }

  experiment::EnvironmentConfig Config() const {
    experiment::EnvironmentConfig config;
    config.dataset = data::ParseDatasetName(dataset);
    config.explainer.method = xai::ParseMethod(explainer);
    config.csv_path = csv;
    config.num_attributes = attributes;
    config.seed = seed;
    return config;
  }
};

void PrintVerdict(const char* name, const experiment::Verdict& verdict) {
  std::printf("%s %s: %s\n", name, verdict.pass ? "holds" : "does not hold",
              verdict.detail.c_str());
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::vector<TestCondition> ConditionsOf(XaiType xai_type) {
  if (xai_type == XaiType::kNone) return {TestCondition::kWithoutXai};
  return {TestCondition::kWithXai, TestCondition::kWithoutXai};
}

int RunSimulate(const EnvOptions& env_options, const std::string& xai_text,
                const std::string& condition_text, const std::string& population_path,
                size_t participants, uint64_t seed, const fs::path& out) {
  const auto env = experiment::StudyEnvironment::Build(env_options.Config());
  const XaiType xai_type = ParseXaiType(xai_text);
  const TestCondition condition =
      condition_text.empty() ? (xai_type == XaiType::kNone ? TestCondition::kWithoutXai
                                                           : TestCondition::kWithXai)
                             : ParseTestCondition(condition_text);
  fitting::PopulationSpec spec = fitting::PublishedPopulationSpec(xai_type, condition);
  if (!population_path.empty()) {
    std::ifstream in(population_path);
    if (!in) throw ConfigError("cannot read " + population_path);
    Json json;
    in >> json;
    spec = fitting::PopulationSpecFromJson(json);
  }
  const auto population =
      fitting::SamplePopulation(spec, participants, DeriveSeed(seed, {0x909}));
  const auto splits = env.Splits(participants, DeriveSeed(seed, {0x5b1}));
  std::vector<experiment::SessionRecord> records;
  std::vector<Json> params;
  for (size_t i = 0; i < participants; ++i) {
    auto record =
        experiment::RunVirtualSession(population[i], splits[i], env, xai_type, DeriveSeed(seed, {i}));
    char id[32];
    std::snprintf(id, sizeof(id), "v%05zu", i);
    record.participant_id = id;
    Json p = cognitive::ToJson(population[i]);
    p["participant_id"] = id;
    params.push_back(std::move(p));
    records.push_back(std::move(record));
  }
  fs::create_directories(out);
  experiment::WriteSessionRecords((out / "sessions.jsonl").string(), records);
  WriteJsonLines(out / "participants.jsonl", params);
  std::printf("wrote %zu sessions to %s (model accuracy %.3f)\n", records.size(),
              (out / "sessions.jsonl").c_str(), env.model_accuracy());
  return 0;
}

int RunFit(const std::string& sessions_path, int budget, uint64_t seed, const fs::path& out) {
  const auto records = experiment::ReadSessionRecords(sessions_path);
  std::vector<Json> fits;
  std::map<std::string, int> counts;
  for (size_t i = 0; i < records.size(); ++i) {
    for (TestCondition condition : ConditionsOf(records[i].xai_type)) {
      const auto prepared = fitting::PrepareSession(records[i], condition);
      if (prepared.scored.empty()) continue;
      const auto selection =
          fitting::SelectStrategy(prepared, {budget, DeriveSeed(seed, {i}), {}});
      Json line = fitting::ToJson(selection.best);
      line["xai_type"] = ToString(records[i].xai_type);
      Json candidates = Json::array();
      for (const auto& c : selection.candidates) candidates.push_back(fitting::ToJson(c));
      line["candidates"] = candidates;
      fits.push_back(std::move(line));
      counts[std::string(ToString(records[i].xai_type)) + "/" +
             std::string(ToString(condition)) + "/" +
             cognitive::ToString(selection.best.strategy)]++;
    }
  }
  fs::create_directories(out);
  WriteJsonLines(out / "fits.jsonl", fits);
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, n] : counts) rows.push_back({key, std::to_string(n)});
  experiment::WriteCsv(out / "strategy_counts.csv", {"cell_strategy", "sessions"}, rows);
  for (const auto& [key, n] : counts) std::printf("%-55s %d\n", key.c_str(), n);
  return 0;
}

int RunCompareProxies(const std::string& sessions_path, int budget, uint64_t seed,
                      const fs::path& out) {
  const auto records = experiment::ReadSessionRecords(sessions_path);
  struct Sums {
    double coax = 0, dt = 0, knn = 0, mlp = 0;
    int n = 0;
  };
  std::map<std::string, Sums> by_type;
  std::vector<Json> lines;
  for (size_t i = 0; i < records.size(); ++i) {
    for (TestCondition condition : ConditionsOf(records[i].xai_type)) {
      const auto prepared = fitting::PrepareSession(records[i], condition);
      if (prepared.scored.empty()) continue;
      const auto selection =
          fitting::SelectStrategy(prepared, {budget, DeriveSeed(seed, {i}), {}});
      Sums& s = by_type[std::string(ToString(records[i].xai_type))];
      s.coax += selection.best.nll;
      s.n++;
      Json line{{"session_id", prepared.session_id},
                {"condition", ToString(condition)},
                {"coax", fitting::ToJson(selection.best)}};
      for (auto family : {proxies::Family::kDecisionTree, proxies::Family::kKnn,
                          proxies::Family::kMlp}) {
        const auto fit = proxies::TuneProxy(family, prepared, DeriveSeed(seed, {i, 7}));
        (family == proxies::Family::kDecisionTree ? s.dt
         : family == proxies::Family::kKnn        ? s.knn
                                                  : s.mlp) += fit.nll;
        line[proxies::ToString(family)] = proxies::ToJson(fit, prepared.session_id);
      }
      lines.push_back(std::move(line));
    }
  }
  fs::create_directories(out);
  WriteJsonLines(out / "proxy_fits.jsonl", lines);
  std::vector<std::vector<std::string>> rows;
  for (const auto& [type, s] : by_type) {
    rows.push_back({type, std::to_string(s.n), Fmt(s.coax / s.n), Fmt(s.dt / s.n),
                    Fmt(s.knn / s.n), Fmt(s.mlp / s.n)});
    std::printf("%-12s n=%-4d coax %.4f  dt %.4f  knn %.4f  mlp %.4f\n", type.c_str(), s.n,
                s.coax / s.n, s.dt / s.n, s.knn / s.n, s.mlp / s.n);
  }
  experiment::WriteCsv(out / "proxy_nll.csv",
                       {"xai_type", "fits", "coax", "dt", "knn", "mlp"}, rows);
  return 0;
}

int RunHypothesis(const EnvOptions& env_options, const std::string& study,
                  size_t participants, uint64_t seed, int tukey_draws, const fs::path& out) {
  const auto config = env_options.Config();
  if (study == "attributes") {
    const auto result = experiment::RunAttributeSweep(config, 1, 9, participants, seed);
    experiment::WriteSweepReport(out, "attributes", result);
    PrintVerdict("attribute decline", experiment::CheckAttributeDecline(result));
  } else {
    const auto env = experiment::StudyEnvironment::Build(config);
    if (study == "conditions") {
      const auto result = experiment::RunConditionStudy(env, participants, seed, tukey_draws);
      experiment::WriteConditionReport(out, "conditions", result);
      for (size_t i = 0; i < result.cells.size(); ++i) {
        std::printf("%-26s %.3f +- %.3f  %s\n", result.cells[i].name.c_str(),
                    result.cells[i].ci.mean, result.cells[i].ci.half_width,
                    result.tukey.letters[i].c_str());
      }
      PrintVerdict("condition ordering", experiment::CheckConditionOrdering(result));
    } else if (study == "training") {
      const auto result = experiment::RunTrainingSweep(env, 1, 13, participants, seed);
      experiment::WriteSweepReport(out, "training", result);
      PrintVerdict("training plateau", experiment::CheckTrainingPlateau(result));
    } else if (study == "explainer") {
      const std::vector<xai::Method> methods = {xai::Method::kShapley, xai::Method::kLime,
                                                xai::Method::kIntegratedGradients,
                                                xai::Method::kInputGradients};
      std::vector<std::string> labels;
      for (auto m : methods) labels.push_back(xai::ToString(m));
      const auto result = experiment::RunExplainerStudy(env, methods, participants, seed);
      experiment::WriteSweepReport(out, "explainer", result, labels);
      // iv is the method index: input gradients (3) vs integrated gradients (2).
      PrintVerdict("explainer order", experiment::CheckExplainerOrder(result, 3, 2));
    } else if (study == "trends") {
      for (auto p : {experiment::TrendParameter::kAlpha, experiment::TrendParameter::kK,
                     experiment::TrendParameter::kRho, experiment::TrendParameter::kZeta}) {
        const auto trend = experiment::RunParameterTrend(env, p, 5, participants, seed);
        experiment::WriteTrendReport(out, "trend_" + experiment::ToString(p), trend);
        std::printf("%-6s spearman %+.3f  bin spearman %+.3f\n",
                    experiment::ToString(p).c_str(), trend.spearman, trend.bin_spearman);
      }
    } else {
      throw ConfigError("unknown study '" + study + "'");
    }
  }
  std::printf("wrote %s report to %s\n", study.c_str(), out.c_str());
  return 0;
}

int RunReport(const std::string& sessions_path, int tukey_draws, const fs::path& out) {
  const auto records = experiment::ReadSessionRecords(sessions_path);
  const auto cells = experiment::StudyConditions();
  experiment::ConditionStudy study;
  std::vector<std::vector<double>> groups;
  for (const auto& cell : cells) {
    // Participant means over their sessions in this cell.
    std::map<std::string, std::pair<double, int>> by_participant;
    for (const auto& r : records) {
      if (r.excluded || r.xai_type != cell.xai_type) continue;
      const auto c = experiment::Correctness(r, cell.condition);
      if (!c) continue;
      auto& acc = by_participant[r.participant_id];
      acc.first += *c;
      acc.second++;
    }
    experiment::CellResult result;
    result.name = experiment::CellName(cell);
    result.cell = cell;
    for (const auto& [id, acc] : by_participant) {
      result.correctness.push_back(acc.first / acc.second);
    }
    if (result.correctness.size() < 2) continue;
    result.ci = experiment::Ci95(result.correctness);
    groups.push_back(result.correctness);
    study.cells.push_back(std::move(result));
  }
  if (groups.size() >= 2) {
    study.anova = experiment::OneWayAnova(groups);
    study.tukey = experiment::TukeyHsd(groups, 0.05, tukey_draws);
  }
  experiment::WriteConditionReport(out, "conditions", study);
  for (size_t i = 0; i < study.cells.size(); ++i) {
    std::printf("%-26s n=%-4zu %.3f +- %.3f  %s\n", study.cells[i].name.c_str(),
                study.cells[i].ci.n, study.cells[i].ci.mean, study.cells[i].ci.half_width,
                i < study.tukey.letters.size() ? study.tukey.letters[i].c_str() : "");
  }
  return 0;
}

int RunExplain(const EnvOptions& env_options, size_t count, const fs::path& out) {
  const auto env = experiment::StudyEnvironment::Build(env_options.Config());
  std::vector<Json> lines;
  for (size_t i = 0; i < std::min(count, env.pool().size()); ++i) {
    const auto& instance = env.pool()[i];
    Json line = xai::ToJson(instance.id, env.ExplanationFor(instance.id));
    line["ai_label"] = ToInt(env.AiLabel(instance.id));
    line["norm"] = instance.norm_values;
    lines.push_back(std::move(line));
  }
  fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
  WriteJsonLines(out, lines);
  std::printf("wrote %zu explanations to %s\n", lines.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive model of explanation use in forward simulation"};
  app.require_subcommand(1);

  EnvOptions env_options;
  std::string xai_type = "attribution", condition, population, sessions, study = "conditions";
  std::string config_path;
  size_t participants = 100, count = 20;
  uint64_t seed = 1;
  int budget = 60, tukey_draws = 1000000;
  fs::path out = "coax-out";

  auto* simulate = app.add_subcommand("simulate", "run virtual participants through the protocol");
  env_options.Add(simulate);
  simulate->add_option("--xai-type", xai_type, "none, importance or attribution");
  simulate->add_option("--condition", condition, "population mix: with_xai or without_xai");
  simulate->add_option("--population", population, "population spec JSON file");
  simulate->add_option("--participants", participants);
  simulate->add_option("--seed", seed);
  simulate->add_option("--out", out);

  auto* fit = app.add_subcommand("fit", "select a strategy and fit parameters per session");
  fit->add_option("--sessions", sessions, "session records (JSONL)")->required();
  fit->add_option("--budget", budget, "evaluations per strategy");
  fit->add_option("--seed", seed);
  fit->add_option("--out", out);

  auto* compare = app.add_subcommand("compare-proxies", "CoAX fits against tuned ML proxies");
  compare->add_option("--sessions", sessions, "session records (JSONL)")->required();
  compare->add_option("--budget", budget);
  compare->add_option("--seed", seed);
  compare->add_option("--out", out);

  auto* hypothesis = app.add_subcommand("hypothesis", "simulated studies");
  env_options.Add(hypothesis);
  hypothesis->add_option("--study", study, "conditions, training, attributes, explainer, trends");
  hypothesis->add_option("--participants", participants, "per cell (per bin for trends)");
  hypothesis->add_option("--seed", seed);
  hypothesis->add_option("--tukey-draws", tukey_draws);
  hypothesis->add_option("--out", out);

  auto* report = app.add_subcommand("report", "condition summary of session records");
  report->add_option("--sessions", sessions, "session records (JSONL)")->required();
  report->add_option("--tukey-draws", tukey_draws);
  report->add_option("--out", out);

  auto* serve = app.add_subcommand("serve", "run the study service");
  serve->add_option("--config", config_path, "service config JSON");

  auto* explain = app.add_subcommand("explain", "export explanations for the stimulus pool");
  env_options.Add(explain);
  explain->add_option("--count", count);
  explain->add_option("--out", out, "output JSONL file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*simulate) {
      return RunSimulate(env_options, xai_type, condition, population, participants, seed, out);
    }
    if (*fit) return RunFit(sessions, budget, seed, out);
    if (*compare) return RunCompareProxies(sessions, budget, seed, out);
    if (*hypothesis) {
      return RunHypothesis(env_options, study, participants, seed, tukey_draws, out);
    }
    if (*report) return RunReport(sessions, tukey_draws, out);
    if (*explain) return RunExplain(env_options, count, out);
    if (*serve) {
      service::ServiceConfig config;
      if (!config_path.empty()) config = service::LoadServiceConfig(config_path);
      service::ApplyEnvironmentOverrides(config);
      service::StudyService svc(config);
      service::Serve(svc);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

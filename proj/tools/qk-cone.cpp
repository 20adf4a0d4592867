// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: load target/bundle/profile configurations, apply cone
// transforms, run the consistency suites, emit serialized results.
// Exit codes: 0 all passed, 1 verification failures, 2 configuration errors.

#include <iostream>

#include <CLI11.hpp>

#include "qkcone/engine.hpp"

using namespace qkcone;

namespace {

int run_transform(const std::string& manifest_path, const std::string& target,
                  const std::string& input, const std::string& seed,
                  const std::string& pipeline_path, int dmax, int series_order,
                  const std::string& out_path) {
  Json manifest;
  if (!manifest_path.empty()) {
    manifest = load_json_file(manifest_path);
  } else {
    if (target.empty()) {
      std::cerr << "transform needs --manifest or --target\n";
      return 2;
    }
    manifest["target"] = target;
    if (!seed.empty()) manifest["seed"] = seed;
    if (!input.empty()) manifest["input"] = input;
    manifest["dmax"] = dmax;
    manifest["series_order"] = series_order;
    if (!pipeline_path.empty()) manifest["pipeline"] = load_json_file(pipeline_path);
  }
  TransformOutcome outcome = cmd_transform(manifest);
  Json result = transform_result_json(manifest, outcome);
  if (!out_path.empty())
    write_json_file(out_path, result);
  else
    std::cout << result.dump(2) << "\n";
  return 0;
}

int run_verify(const std::string& suite, const std::string& config_path, int series_order,
               const std::string& out_path) {
  Json config = Json::object();
  if (!config_path.empty()) config = load_json_file(config_path);
  if (!config.contains("order")) config["order"] = series_order;
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = {"split",         "omega",     "pfd",           "level-identity",
              "pipeline-4-10", "qsd-forms", "level-duality", "recursion",
              "transfer",      "limits",    "abelianization"};
  } else {
    suites.push_back(suite);
  }
  Json reports = Json::array();
  bool ok = true;
  for (const auto& name : suites) {
    SuiteReport rep = run_suite(name, config.contains(name) ? config.at(name) : config);
    ok = ok && rep.all_pass();
    reports.push_back(rep.to_json());
    std::cerr << (rep.all_pass() ? "[pass] " : "[FAIL] ") << name << " ("
              << rep.cases.size() - rep.failed() << "/" << rep.cases.size() << ")\n";
  }
  Json result = reports.size() == 1 ? reports[0] : Json{{"reports", reports}};
  if (!out_path.empty())
    write_json_file(out_path, result);
  else
    std::cout << result.dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qk-cone: exact cone transforms on rational loop spaces"};
  app.require_subcommand(1);

  std::string manifest, target, input, seed, pipeline, suite, config, out, format = "json";
  int dmax = 3, series_order = 4;

  auto* t = app.add_subcommand("transform", "apply a transform pipeline to a loop element");
  t->add_option("--manifest", manifest, "run manifest (json)");
  t->add_option("--target", target, "target space config path or builtin name");
  t->add_option("--input", input, "loop element input path");
  t->add_option("--seed", seed, "builtin seed: origin | hypergeometric");
  t->add_option("--pipeline", pipeline, "pipeline stages (json array file)");
  t->add_option("--dmax", dmax, "Novikov truncation bound");
  t->add_option("--series-order", series_order, "truncation order for series-mode stages");
  t->add_option("--out", out, "output path (stdout when omitted)");
  t->add_option("--format", format, "output format (json)");

  auto* v = app.add_subcommand("verify", "run a machine-checkable consistency suite");
  v->add_option("--suite", suite,
                "split | omega | pfd | level-identity | pipeline-4-10 | qsd-forms | "
                "level-duality | recursion | transfer | limits | abelianization | all")
      ->required();
  v->add_option("--config", config, "suite parameters (json)");
  v->add_option("--series-order", series_order, "series order for the telescoping suite");
  v->add_option("--out", out, "report path (stdout when omitted)");
  v->add_option("--format", format, "output format (json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (format != "json") {
      std::cerr << "unsupported format: " << format << "\n";
      return 2;
    }
    if (app.got_subcommand(t))
      return run_transform(manifest, target, input, seed, pipeline, dmax, series_order, out);
    return run_verify(suite, config, series_order, out);
  } catch (const ConfigError& ex) {
    std::cerr << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

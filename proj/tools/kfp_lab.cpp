// Copyright 2026 The kfp-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kfp-lab: runs one experiment from a JSON config and writes a CSV.
//
//   kfp-lab <experiment> --config <path.json> [--seed N] [--out path.csv] [--workers N]
//   kfp-lab schema [--out path.json]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical or domain error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kfp/config.hpp"
#include "kfp/csv.hpp"
#include "kfp/errors.hpp"
#include "kfp/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

constexpr kfp::ExperimentKind kAllExperiments[] = {
    kfp::ExperimentKind::kernel_check,    kfp::ExperimentKind::mixture_decay,  kfp::ExperimentKind::coadapted_decay,
    kfp::ExperimentKind::non_contraction, kfp::ExperimentKind::sqrt_optimality, kfp::ExperimentKind::stopping_time,
    kfp::ExperimentKind::martingale_h,
};

nlohmann::json all_schemas() {
  nlohmann::json out = nlohmann::json::array();
  for (auto kind : kAllExperiments)
    out.push_back(kfp::schema_json(kfp::experiment_name(kind), kfp::experiment_columns(kind)));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw kfp::ConfigError("cannot write '" + path + "'");
  f << content;
  if (!f) throw kfp::ConfigError("failed writing '" + path + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Kinetic Fokker-Planck torus convergence lab"};
  app.set_version_flag("--version", std::string(kfp::kToolVersion));
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<std::size_t> workers;
  app.add_option("experiment", experiment, "experiment name, or 'schema' to print the column schema")->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_path, "output path (default: config out_path, else stdout)");
  app.add_option("--workers", workers, "worker threads (0: all cores); does not change results");
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (experiment == "schema") {
    const std::string text = all_schemas().dump(2) + "\n";
    if (out_path.empty())
      std::cout << text;
    else
      write_file(out_path, text);
    return 0;
  }

  const auto kind = kfp::parse_experiment(experiment);
  if (!kind) throw kfp::ConfigError("unknown experiment '" + experiment + "'");
  if (config_path.empty()) throw kfp::ConfigError("--config is required");
  kfp::ExperimentConfig cfg = kfp::load_config(config_path, kind);
  if (seed) cfg.seed = *seed;
  if (!out_path.empty()) cfg.out_path = out_path;
  if (workers) cfg.workers = *workers;
  cfg.validate();

  const auto result = kfp::run_experiment(cfg);
  std::ostringstream csv;
  // The destination is not part of the result; leaving it out keeps runs
  // that differ only in --out byte-identical.
  auto resolved = kfp::to_json(cfg);
  resolved.erase("out_path");
  kfp::write_csv(csv, result.table, resolved, result.summary);
  if (cfg.out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(cfg.out_path, csv.str());
    write_file(cfg.out_path + ".schema.json",
               kfp::schema_json(experiment, result.table.columns()).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const kfp::ConfigError& e) {
    std::cerr << "kfp-lab: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::bad_alloc&) {
    std::cerr << "kfp-lab: out of memory\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "kfp-lab: numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

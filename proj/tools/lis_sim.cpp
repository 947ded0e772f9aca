// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// lis-sim: experiment runner for panel-based LIS uplink processing.

#include "lis/experiments.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lis::InvalidArgument("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(lis::ExperimentConfig config) {
  using lis::Experiment;
  switch (config.experiment) {
    case Experiment::LatencyBreakdown: {
      const auto result = lis::run_latency_breakdown(config);
      for (const auto& r : result.rows) {
        std::cout << fmt::format("{:>4} K={:<4} total {:10.2f} us  (wait {:.2f}, lpu {:.2f}, fronthaul {:.2f}, cpu {:.2f})\n",
                                 lis::to_string(r.kind), r.k, r.total_us, r.wait_us,
                                 r.lpu_frontend_us + r.lpu_local_us, r.fronthaul_us, r.cpu_us);
      }
      break;
    }
    case Experiment::SweepFixedM:
    case Experiment::SweepFixedN: {
      const auto result = config.experiment == Experiment::SweepFixedM ? lis::run_sweep_fixed_m(config)
                                                                       : lis::run_sweep_fixed_n(config);
      std::cout << fmt::format("normalization beta {:.6e}\n", result.beta);
      for (const auto& r : result.rows) {
        std::cout << fmt::format("P={:<4} {:>4} mean {:.4f}  p5 {:.4f}  latency {:.2f} us\n", r.summary.p,
                                 lis::to_string(r.summary.kind), r.summary.mean_user_se, r.summary.percentile(5.0),
                                 r.latency.total_us);
      }
      break;
    }
    case Experiment::ChainTrace: {
      const auto result = lis::run_chain_trace(config);
      std::cout << fmt::format("{} hops, chain vs centralized relative error {:.3e}\n", result.chain.hops.size(),
                               result.relative_error);
      break;
    }
    case Experiment::Validate: {
      const auto report = lis::run_validate(config);
      for (const auto& c : report.checks) {
        std::cout << fmt::format("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
      }
      return report.passed() ? 0 : 1;
    }
  }
  std::cout << "outputs written to " << config.output_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Panel-based LIS uplink simulator: equalization, daisy-chain aggregation and latency model"};
  std::string experiment;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool paper_scale = false;

  app.add_option("experiment", experiment,
                 "latency-breakdown | sweep-fixed-m | sweep-fixed-n | chain-trace | validate (default: the config's)");
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_flag("--paper-scale", paper_scale, "full-size scenario and realization counts (slow)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    lis::Experiment which;
    if (!experiment.empty()) {
      which = lis::parse_experiment(experiment);
    } else if (!config_path.empty()) {
      which = lis::apply_config_json(lis::default_config(lis::Experiment::Validate, paper_scale), text).experiment;
    } else {
      std::cerr << "error: name an experiment or pass a --config that sets one\n";
      return 2;
    }
    lis::ExperimentConfig config = lis::default_config(which, paper_scale);
    if (!config_path.empty()) config = lis::apply_config_json(config, text);
    config.experiment = which;
    if (*out_opt) config.output_dir = out_dir;
    if (*seed_opt) config.master_seed = seed;
    if (paper_scale) {
      std::cerr << "warning: paper-scale run; expect hours of compute for the sweeps\n";
    }
    return run(std::move(config));
  } catch (const lis::ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 2;
  } catch (const lis::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

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

#ifndef LIS_EXPERIMENTS_HPP
#define LIS_EXPERIMENTS_HPP

#include "lis/channel.hpp"
#include "lis/equalize.hpp"
#include "lis/latency.hpp"
#include "lis/metrics.hpp"
#include "lis/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lis {

enum class Experiment { LatencyBreakdown, SweepFixedM, SweepFixedN, ChainTrace, Validate };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// Bad configuration; the message starts with the offending JSON pointer.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& path, const std::string& what) : InvalidArgument(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Validate;
  bool paper_scale = false;

  // scenario
  RoomSpec room;
  double plane_height_m = 1.5;
  double wall_standoff_m = -1.0;  // negative: quarter wavelength
  int total_antennas = 128;       // fixed-M sweep
  int antennas_per_panel = 16;    // fixed-N sweep
  int users = 16;
  std::vector<int> panel_counts;
  double snr_db = 10.0;
  double rician_db = 5.0;
  std::vector<EqualizerKind> kinds = {EqualizerKind::MRC, EqualizerKind::ZF, EqualizerKind::MMSE};

  // monte carlo
  int placements = 20;
  int fading_draws = 100;
  std::uint64_t master_seed = 1;
  std::vector<double> percentiles = {5.0, 50.0};

  // latency
  double clock_hz = kDefaultClockHz;
  double per_hop_us = kPerHopLatencyUs;
  double cable_distance_m = 0.0;
  double air_distance_m = 0.0;
  FrameSpec frame;
  CycleAnchors anchors = table_one_anchors();
  std::vector<int> latency_users = {16, 128};
  int latency_antennas_per_panel = kMeasuredAntennasPerPanel;
  int latency_panel_count = 128;

  // chain trace
  EqualizerKind chain_kind = EqualizerKind::ZF;
  int chain_panel_count = 8;
  int chain_antennas_per_panel = 16;
  int chain_users = 8;

  // validate
  int fuzz_instances = 1000;

  std::filesystem::path output_dir = "out";

  ChannelParams channel_params() const;
  CycleModel cycle_model() const { return fit_cycle_model(anchors, clock_hz); }
  ChainTopology topology(int panel_count) const;
};

/// Defaults for an experiment: desk scale unless `paper_scale`.
ExperimentConfig default_config(Experiment experiment, bool paper_scale);

/// Applies a JSON document on top of `base`. Unknown keys and ill-typed values raise ConfigError.
ExperimentConfig apply_config_json(ExperimentConfig base, std::string_view json_text);

/// Fully resolved configuration as JSON, fitted cycle coefficients included.
std::string config_to_json(const ExperimentConfig& config, std::optional<double> beta = std::nullopt);

struct LatencyBreakdownResult {
  std::vector<LatencyBreakdown> rows;
};

struct SweepRow {
  SeSummary summary;
  LatencyBreakdown latency;
  double zf_over_mrc_4p = 0.0;  // ZF latency at P over MRC latency at 4P
};

struct SweepExperimentResult {
  double beta = 0.0;
  std::vector<SweepRow> rows;
};

struct ChainTraceResult {
  ChainResult chain;
  CVectorXd centralized;
  double relative_error = 0.0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

// Each runner writes its CSV files plus resolved_config.json into config.output_dir when
// `write_files` is set.
LatencyBreakdownResult run_latency_breakdown(const ExperimentConfig& config, bool write_files = true);
SweepExperimentResult run_sweep_fixed_m(const ExperimentConfig& config, bool write_files = true);
SweepExperimentResult run_sweep_fixed_n(const ExperimentConfig& config, bool write_files = true);
ChainTraceResult run_chain_trace(const ExperimentConfig& config, bool write_files = true);
ValidationReport run_validate(const ExperimentConfig& config, bool write_files = true);

}  // namespace lis

#endif  // LIS_EXPERIMENTS_HPP

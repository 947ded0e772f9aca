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

#ifndef LIS_METRICS_HPP
#define LIS_METRICS_HPP

#include "lis/channel.hpp"
#include "lis/equalize.hpp"
#include "lis/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lis {

/// SINR of user k behind receive row w_k, unit-energy symbols, residual interference as noise:
///   |w_k h_k|^2 / (sum_{j != k} |w_k h_j|^2 + N0 ||w_k||^2).
/// A zero row yields zero.
template <typename DerivedW, typename DerivedH>
double user_sinr(const Eigen::MatrixBase<DerivedW>& w_row, const Eigen::MatrixBase<DerivedH>& h, Eigen::Index k,
                 double noise_power) {
  static_assert(DerivedW::IsVectorAtCompileTime, "w_row must be a vector");
  if (w_row.size() != h.rows()) throw InvalidArgument("receive row length must match channel rows");
  if (k < 0 || k >= h.cols()) throw InvalidArgument("user index out of range");
  using Real = typename DerivedH::RealScalar;
  Eigen::Matrix<std::complex<Real>, 1, Eigen::Dynamic> w(w_row.size());
  for (Eigen::Index m = 0; m < w_row.size(); ++m) w(m) = w_row(m);
  const auto gains = (w * h).eval();
  const double signal = std::norm(gains(k));
  if (signal == 0.0) return 0.0;
  double interference = 0.0;
  for (Eigen::Index j = 0; j < gains.size(); ++j) {
    if (j != k) interference += std::norm(gains(j));
  }
  return signal / (interference + noise_power * static_cast<double>(w.squaredNorm()));
}

/// Per-user SINR for every row of a K x M equalizer.
template <typename DerivedW, typename DerivedH>
Eigen::VectorXd sinr_all(const Eigen::MatrixBase<DerivedW>& w, const Eigen::MatrixBase<DerivedH>& h,
                         double noise_power) {
  if (w.cols() != h.rows() || w.rows() != h.cols()) throw InvalidArgument("equalizer must be K x M for an M x K channel");
  const auto gains = (w * h).eval();
  Eigen::VectorXd out(w.rows());
  for (Eigen::Index k = 0; k < w.rows(); ++k) {
    const double signal = std::norm(gains(k, k));
    if (signal == 0.0) {
      out(k) = 0.0;
      continue;
    }
    double interference = 0.0;
    for (Eigen::Index j = 0; j < gains.cols(); ++j) {
      if (j != k) interference += std::norm(gains(k, j));
    }
    out(k) = signal / (interference + noise_power * static_cast<double>(w.row(k).squaredNorm()));
  }
  return out;
}

inline double spectral_efficiency(double sinr) {
  if (!(sinr >= 0.0)) throw InvalidArgument("SINR must be non-negative");
  return std::log2(1.0 + sinr);
}

struct SeSample {
  std::vector<double> per_user_se;  // bits/s/Hz
  int realization_id = 0;
  int placement_id = 0;
};

struct SeSummary {
  std::string label;
  int p = 0;
  int n = 0;
  int m = 0;
  int k = 0;
  EqualizerKind kind = EqualizerKind::MRC;
  double mean_user_se = 0.0;
  std::map<double, double> percentile_se;  // percentile in [0, 100] -> SE
  int n_placements = 0;
  int n_fading_draws = 0;
  std::size_t n_samples = 0;  // per-user SE values pooled
  int singular_draws = 0;

  double percentile(double q) const;
};

/// Linear interpolation between order statistics; `sorted` must be ascending and non-empty.
double percentile_of_sorted(std::span<const double> sorted, double q);

/// Pools every per-user SE of `samples` into a mean and the requested percentiles.
SeSummary summarize(std::span<const SeSample> samples, std::span<const double> percentiles);

struct SweepPoint {
  std::string label;
  int panel_count = 1;
  int total_antennas = 1;
};

struct SweepSpec {
  RoomSpec room;
  LayoutOptions layout;
  ChannelParams channel;
  int users = 16;
  std::vector<SweepPoint> points;
  std::vector<EqualizerKind> kinds = {EqualizerKind::MRC, EqualizerKind::ZF, EqualizerKind::MMSE};
  int placements = 20;
  int fading_draws = 100;
  std::uint64_t master_seed = 1;
  std::vector<double> percentiles = {5.0, 50.0};
  int threads = 0;  // zero: LIS_SIM_THREADS, else hardware concurrency
};

struct SweepResult {
  double beta = 0.0;  // common channel amplitude scale for the whole set
  std::vector<SeSummary> summaries;  // point-major, then kinds in SweepSpec order
};

/// Seed streams for derive_seed().
inline constexpr std::uint64_t kPlacementStream = 1;
inline constexpr std::uint64_t kFadingStream = 2;

/// Monte-Carlo spectral efficiency over user placements and Rician draws.
///
/// Every point sees the same placements and fading seeds, and every equalizer the same channel
/// draw. One amplitude scale is computed over all (point, placement) line-of-sight channels
/// before any SINR is evaluated. Draws whose Gramian is singular are counted per kind and left
/// out of the pooled samples. Results do not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec);

/// Thread count from LIS_SIM_THREADS, else hardware concurrency (at least one).
int default_thread_count();

/// Columns: label,P,N,M,K,kind,mean_se,p5_se,p50_se,n_samples,singular_draws
void write_summary_csv(std::ostream& out, std::span<const SeSummary> rows);

}  // namespace lis

#endif  // LIS_METRICS_HPP

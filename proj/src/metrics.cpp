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

#include "lis/metrics.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace lis {

double percentile_of_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw InvalidArgument(fmt::format("percentile {} outside [0, 100]", q));
  const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double SeSummary::percentile(double q) const {
  auto it = percentile_se.find(q);
  if (it == percentile_se.end()) throw InvalidArgument(fmt::format("percentile {} was not computed", q));
  return it->second;
}

SeSummary summarize(std::span<const SeSample> samples, std::span<const double> percentiles) {
  SeSummary out;
  std::vector<double> pooled;
  std::vector<int> placements;
  for (const SeSample& s : samples) {
    pooled.insert(pooled.end(), s.per_user_se.begin(), s.per_user_se.end());
    placements.push_back(s.placement_id);
  }
  std::sort(placements.begin(), placements.end());
  out.n_placements = static_cast<int>(std::unique(placements.begin(), placements.end()) - placements.begin());
  out.n_samples = pooled.size();
  if (pooled.empty()) {
    out.mean_user_se = std::numeric_limits<double>::quiet_NaN();
    for (double q : percentiles) out.percentile_se[q] = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double sum = 0.0;
  for (double v : pooled) sum += v;
  out.mean_user_se = sum / static_cast<double>(pooled.size());
  std::sort(pooled.begin(), pooled.end());
  for (double q : percentiles) out.percentile_se[q] = percentile_of_sorted(pooled, q);
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("LIS_SIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct KindOutcome {
  std::vector<SeSample> samples;
  int singular_draws = 0;
};

// One (point, placement) work item: every fading draw, every equalizer.
std::vector<KindOutcome> simulate_placement(const SweepSpec& spec, const AntennaArray& array, const UePlacement& ues,
                                            int placement, double beta) {
  const CMatrixXd h_los = beta * build_los_matrix(array, ues, spec.room.wavelength_m());
  const double n0 = spec.channel.noise_power;
  std::vector<KindOutcome> out(spec.kinds.size());
  for (int draw = 0; draw < spec.fading_draws; ++draw) {
    const std::uint64_t index = static_cast<std::uint64_t>(placement) * spec.fading_draws + draw;
    const auto realization = sample_channel(h_los, spec.channel, derive_seed(spec.master_seed, kFadingStream, index));
    for (std::size_t i = 0; i < spec.kinds.size(); ++i) {
      try {
        const CMatrixXd w = equalizer_matrix(spec.kinds[i], realization.h, n0);
        const Eigen::VectorXd sinr = sinr_all(w, realization.h, n0);
        SeSample sample;
        sample.placement_id = placement;
        sample.realization_id = draw;
        sample.per_user_se.resize(sinr.size());
        for (Eigen::Index k = 0; k < sinr.size(); ++k) sample.per_user_se[k] = spectral_efficiency(sinr(k));
        out[i].samples.push_back(std::move(sample));
      } catch (const SingularGramian&) {
        ++out[i].singular_draws;
      }
    }
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.points.empty()) throw InvalidArgument("sweep has no configurations");
  if (spec.kinds.empty()) throw InvalidArgument("sweep has no equalizers");
  if (spec.placements < 1 || spec.fading_draws < 1) throw InvalidArgument("sweep needs at least one realization");
  spec.channel.validate();

  std::vector<AntennaArray> arrays;
  for (const SweepPoint& pt : spec.points) {
    try {
      arrays.push_back(build_wall_layout(spec.room, pt.total_antennas, pt.panel_count, spec.layout));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(fmt::format("configuration '{}' (M={}, P={}): {}", pt.label, pt.total_antennas,
                                        pt.panel_count, e.what()));
    }
  }
  std::vector<UePlacement> placements;
  for (int i = 0; i < spec.placements; ++i) {
    placements.push_back(place_users(spec.room, spec.users, spec.layout.plane_height_m,
                                     derive_seed(spec.master_seed, kPlacementStream, i)));
  }

  std::vector<double> powers;
  for (const AntennaArray& array : arrays) {
    for (const UePlacement& ues : placements) {
      powers.push_back(mean_antenna_power(build_los_matrix(array, ues, spec.room.wavelength_m())));
    }
  }
  SweepResult result;
  result.beta = normalization_from_powers(powers, spec.channel);

  const std::size_t items = arrays.size() * placements.size();
  std::vector<std::vector<KindOutcome>> outcomes(items);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t item = next++; item < items; item = next++) {
      try {
        const std::size_t point = item / placements.size();
        const int placement = static_cast<int>(item % placements.size());
        outcomes[item] = simulate_placement(spec, arrays[point], placements[placement], placement, result.beta);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(spec.threads > 0 ? spec.threads : default_thread_count(), static_cast<int>(items));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction runs in (point, placement) order regardless of scheduling.
  for (std::size_t point = 0; point < arrays.size(); ++point) {
    for (std::size_t i = 0; i < spec.kinds.size(); ++i) {
      std::vector<SeSample> pooled;
      int singular = 0;
      for (std::size_t placement = 0; placement < placements.size(); ++placement) {
        KindOutcome& o = outcomes[point * placements.size() + placement][i];
        singular += o.singular_draws;
        std::move(o.samples.begin(), o.samples.end(), std::back_inserter(pooled));
      }
      SeSummary s = summarize(pooled, spec.percentiles);
      const SweepPoint& pt = spec.points[point];
      s.label = pt.label;
      s.p = pt.panel_count;
      s.m = pt.total_antennas;
      s.n = pt.total_antennas / pt.panel_count;
      s.k = spec.users;
      s.kind = spec.kinds[i];
      s.n_placements = spec.placements;
      s.n_fading_draws = spec.fading_draws;
      s.singular_draws = singular;
      result.summaries.push_back(std::move(s));
    }
  }
  return result;
}

void write_summary_csv(std::ostream& out, std::span<const SeSummary> rows) {
  out << "label,P,N,M,K,kind,mean_se,p5_se,p50_se,n_samples,singular_draws\n";
  auto pct = [](const SeSummary& s, double q) {
    auto it = s.percentile_se.find(q);
    return it == s.percentile_se.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  };
  for (const SeSummary& s : rows) {
    fmt::print(out, "{},{},{},{},{},{},{:.9f},{:.9f},{:.9f},{},{}\n", s.label, s.p, s.n, s.m, s.k, to_string(s.kind),
               s.mean_user_se, pct(s, 5.0), pct(s, 50.0), s.n_samples, s.singular_draws);
  }
}

}  // namespace lis

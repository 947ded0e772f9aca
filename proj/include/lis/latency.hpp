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

#ifndef LIS_LATENCY_HPP
#define LIS_LATENCY_HPP

#include "lis/chain.hpp"
#include "lis/equalize.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>

namespace lis {

/// Uplink frame timing. The worst case is a user whose data arrives just after an uplink
/// data symbol started; it waits `worst_case_wait_symbols` symbols for the next slot.
struct FrameSpec {
  int slots_per_frame = 7;
  double ofdm_symbol_us = 19.0;  // cyclic prefix included
  double subcarrier_spacing_hz = 60e3;
  int worst_case_wait_symbols = 7;
};

double wait_latency(const FrameSpec& frame);

/// Digital front-end plus FFT, paid once per panel before any MIMO processing.
inline constexpr double kFrontEndLatencyUs = 25.0;
/// Over-the-air propagation, microseconds per meter.
inline constexpr double kAirLatencyUsPerM = 3.3e-3;
inline constexpr double kDefaultClockHz = 150e6;
/// Panel size at which the cycle counts were measured.
inline constexpr int kMeasuredAntennasPerPanel = 16;

enum class CycleOp { ChannelEstimate, Gramian, GramianInverse, MrcCombine, ZfMultiply };

inline constexpr std::array<CycleOp, 5> kCycleOps = {CycleOp::ChannelEstimate, CycleOp::Gramian,
                                                     CycleOp::GramianInverse, CycleOp::MrcCombine,
                                                     CycleOp::ZfMultiply};

std::string_view to_string(CycleOp op);

/// Complexity order of each operation: KN, K^2 N, K^3, KN and K^2.
double complexity(CycleOp op, int n, int k);

struct CycleAnchor {
  int n = 0;
  int k = 0;
  double cycles = 0.0;
};

using AnchorPair = std::array<CycleAnchor, 2>;
using CycleAnchors = std::array<AnchorPair, kCycleOps.size()>;  // indexed by CycleOp

/// Measured ASIP cycle counts at N = 16 for K = 16 and K = 128.
CycleAnchors table_one_anchors();

/// cycles(N, K) = fixed + per_unit * complexity(N, K), pinned to two measured anchors.
struct AffineCycleFit {
  double fixed = 0.0;
  double per_unit = 0.0;
  CycleAnchor first;
  CycleAnchor second;
  double first_x = 0.0;
  double second_x = 0.0;

  /// Evaluated as interpolation from the first anchor so both anchors come back bit-exact.
  double at(double x) const { return first.cycles + (second.cycles - first.cycles) * (x - first_x) / (second_x - first_x); }
};

class CycleModel {
 public:
  CycleModel() = default;
  CycleModel(std::array<AffineCycleFit, kCycleOps.size()> fits, double clock_hz);

  double cycles(CycleOp op, int n, int k) const;
  double microseconds(CycleOp op, int n, int k) const { return cycles(op, n, k) / clock_hz_ * 1e6; }
  const AffineCycleFit& fit(CycleOp op) const { return fits_[static_cast<int>(op)]; }
  double clock_hz() const { return clock_hz_; }

 private:
  std::array<AffineCycleFit, kCycleOps.size()> fits_{};
  double clock_hz_ = kDefaultClockHz;
};

/// Two-point affine fit per operation. Rejects anchor pairs with equal complexity and
/// non-increasing pairs (slope must be positive).
CycleModel fit_cycle_model(const CycleAnchors& anchors, double clock_hz = kDefaultClockHz);

struct LpuLatency {
  double frontend_us = 0.0;
  double local_us = 0.0;
};

/// Channel estimate, then (ZF/MMSE) the local Gramian, then local MRC combining, serialized.
LpuLatency lpu_latency(const CycleModel& model, int n, int k, EqualizerKind kind);

/// Gramian inversion plus the final multiply at the last panel; zero for MRC. The MMSE
/// diagonal loading is K additions and is not charged.
double cpu_latency(const CycleModel& model, int k, EqualizerKind kind);

struct LatencyBreakdown {
  EqualizerKind kind = EqualizerKind::MRC;
  int n = 0;
  int k = 0;
  int p = 0;
  double wait_us = 0.0;
  double lpu_frontend_us = 0.0;
  double lpu_local_us = 0.0;
  double fronthaul_us = 0.0;
  double cpu_us = 0.0;
  double air_us = 0.0;
  double total_us = 0.0;
  bool extrapolated = false;  // N differs from the measured panel size

  double share(double component_us) const { return total_us > 0.0 ? component_us / total_us : 0.0; }
};

struct LatencyOptions {
  double air_distance_m = 0.0;  // zero: propagation over air ignored
};

LatencyBreakdown total_latency(const FrameSpec& frame, const CycleModel& model, int n, int k, EqualizerKind kind,
                               const ChainTopology& topology, const LatencyOptions& options = {});

/// Same, with a default linear chain over `p` panels.
LatencyBreakdown total_latency(const FrameSpec& frame, const CycleModel& model, int n, int k, int p,
                               EqualizerKind kind, const LatencyOptions& options = {});

/// Columns: kind,N,K,P,wait_us,frontend_us,local_us,fronthaul_us,cpu_us,air_us,total_us,
/// then with `relative`: the same components as shares of the total, and finally extrapolated.
void write_latency_csv(std::ostream& out, std::span<const LatencyBreakdown> rows, bool relative);

}  // namespace lis

#endif  // LIS_LATENCY_HPP

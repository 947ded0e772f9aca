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

#include "lis/latency.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <ostream>

namespace lis {

double wait_latency(const FrameSpec& frame) {
  if (frame.worst_case_wait_symbols < 0 || !(frame.ofdm_symbol_us >= 0.0)) {
    throw InvalidArgument("frame wait symbols and symbol duration must be non-negative");
  }
  return frame.worst_case_wait_symbols * frame.ofdm_symbol_us;
}

std::string_view to_string(CycleOp op) {
  switch (op) {
    case CycleOp::ChannelEstimate: return "chan_est";
    case CycleOp::Gramian: return "gramian";
    case CycleOp::GramianInverse: return "gramian_inv";
    case CycleOp::MrcCombine: return "mrc_combine";
    case CycleOp::ZfMultiply: return "zf_multiply";
  }
  return "?";
}

double complexity(CycleOp op, int n, int k) {
  const double nd = n;
  const double kd = k;
  switch (op) {
    case CycleOp::ChannelEstimate:
    case CycleOp::MrcCombine: return kd * nd;
    case CycleOp::Gramian: return kd * kd * nd;
    case CycleOp::GramianInverse: return kd * kd * kd;
    case CycleOp::ZfMultiply: return kd * kd;
  }
  return 0.0;
}

CycleAnchors table_one_anchors() {
  constexpr int n = kMeasuredAntennasPerPanel;
  auto pair = [](double at16, double at128) { return AnchorPair{CycleAnchor{n, 16, at16}, CycleAnchor{n, 128, at128}}; };
  return {
      pair(83, 531),      // H = y S_pilot^-1
      pair(946, 58000),   // G = H^H H
      pair(1817, 890000), // G^-1
      pair(81, 460),      // z_MRC = H^H y
      pair(81, 3300),     // z_ZF = G^-1 z_MRC
  };
}

CycleModel::CycleModel(std::array<AffineCycleFit, kCycleOps.size()> fits, double clock_hz)
    : fits_(fits), clock_hz_(clock_hz) {
  if (!(clock_hz_ > 0.0)) throw InvalidArgument("clock frequency must be positive");
}

double CycleModel::cycles(CycleOp op, int n, int k) const {
  if (n < 1 || k < 1) throw InvalidArgument(fmt::format("cycle model needs N, K >= 1, got N={} K={}", n, k));
  return fit(op).at(complexity(op, n, k));
}

CycleModel fit_cycle_model(const CycleAnchors& anchors, double clock_hz) {
  std::array<AffineCycleFit, kCycleOps.size()> fits{};
  for (CycleOp op : kCycleOps) {
    const AnchorPair& pair = anchors[static_cast<int>(op)];
    AffineCycleFit f;
    f.first = pair[0];
    f.second = pair[1];
    f.first_x = complexity(op, pair[0].n, pair[0].k);
    f.second_x = complexity(op, pair[1].n, pair[1].k);
    if (f.first_x == f.second_x) {
      throw InvalidArgument(fmt::format("{} anchors share complexity {}; the fit is underdetermined", to_string(op),
                                        f.first_x));
    }
    f.per_unit = (f.second.cycles - f.first.cycles) / (f.second_x - f.first_x);
    if (!(f.per_unit > 0.0)) {
      throw InvalidArgument(fmt::format("{} anchors give a non-positive slope {}", to_string(op), f.per_unit));
    }
    f.fixed = f.first.cycles - f.per_unit * f.first_x;
    fits[static_cast<int>(op)] = f;
  }
  return CycleModel(fits, clock_hz);
}

LpuLatency lpu_latency(const CycleModel& model, int n, int k, EqualizerKind kind) {
  double cycles = model.cycles(CycleOp::ChannelEstimate, n, k);
  if (needs_gramian(kind)) cycles += model.cycles(CycleOp::Gramian, n, k);
  cycles += model.cycles(CycleOp::MrcCombine, n, k);
  return {kFrontEndLatencyUs, cycles / model.clock_hz() * 1e6};
}

double cpu_latency(const CycleModel& model, int k, EqualizerKind kind) {
  if (k < 1) throw InvalidArgument("cpu latency needs K >= 1");
  if (kind == EqualizerKind::MRC) return 0.0;
  // Neither op depends on N; any panel size works for the lookup.
  const double cycles = model.cycles(CycleOp::GramianInverse, kMeasuredAntennasPerPanel, k) +
                        model.cycles(CycleOp::ZfMultiply, kMeasuredAntennasPerPanel, k);
  return cycles / model.clock_hz() * 1e6;
}

LatencyBreakdown total_latency(const FrameSpec& frame, const CycleModel& model, int n, int k, EqualizerKind kind,
                               const ChainTopology& topology, const LatencyOptions& options) {
  if (!(options.air_distance_m >= 0.0)) throw InvalidArgument("air distance must be non-negative");
  LatencyBreakdown b;
  b.kind = kind;
  b.n = n;
  b.k = k;
  b.p = topology.panel_count();
  b.wait_us = wait_latency(frame);
  const LpuLatency lpu = lpu_latency(model, n, k, kind);
  b.lpu_frontend_us = lpu.frontend_us;
  b.lpu_local_us = lpu.local_us;
  b.fronthaul_us = fronthaul_latency(topology);
  b.cpu_us = cpu_latency(model, k, kind);
  b.air_us = kAirLatencyUsPerM * options.air_distance_m;
  b.total_us = b.wait_us + b.lpu_frontend_us + b.lpu_local_us + b.fronthaul_us + b.cpu_us + b.air_us;
  b.extrapolated = n != kMeasuredAntennasPerPanel;
  return b;
}

LatencyBreakdown total_latency(const FrameSpec& frame, const CycleModel& model, int n, int k, int p,
                               EqualizerKind kind, const LatencyOptions& options) {
  return total_latency(frame, model, n, k, kind, ChainTopology::linear(p), options);
}

void write_latency_csv(std::ostream& out, std::span<const LatencyBreakdown> rows, bool relative) {
  out << "kind,N,K,P,wait_us,frontend_us,local_us,fronthaul_us,cpu_us,air_us,total_us";
  if (relative) out << ",wait_share,frontend_share,local_share,fronthaul_share,cpu_share,air_share";
  out << ",extrapolated\n";
  for (const LatencyBreakdown& r : rows) {
    fmt::print(out, "{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", to_string(r.kind), r.n, r.k, r.p,
               r.wait_us, r.lpu_frontend_us, r.lpu_local_us, r.fronthaul_us, r.cpu_us, r.air_us, r.total_us);
    if (relative) {
      fmt::print(out, ",{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f}", r.share(r.wait_us), r.share(r.lpu_frontend_us),
                 r.share(r.lpu_local_us), r.share(r.fronthaul_us), r.share(r.cpu_us), r.share(r.air_us));
    }
    fmt::print(out, ",{}\n", r.extrapolated ? 1 : 0);
  }
}

}  // namespace lis

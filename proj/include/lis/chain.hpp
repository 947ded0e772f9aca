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

#ifndef LIS_CHAIN_HPP
#define LIS_CHAIN_HPP

#include "lis/equalize.hpp"
#include "lis/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lis {

/// Cost of one Ethernet aggregation hop between neighbouring panels.
inline constexpr double kPerHopLatencyUs = 0.87;
/// Optical cable propagation, microseconds per meter of chain cable.
inline constexpr double kCableLatencyUsPerM = 5.6e-3;

struct ChainTopology {
  std::vector<int> panel_order;  // panel ids in chain position order
  double per_hop_latency_us = kPerHopLatencyUs;
  double inter_panel_distance_m = 0.0;  // cable length per hop; zero disables the propagation term

  /// Chain visiting panels 0, 1, ..., panel_count - 1.
  static ChainTopology linear(int panel_count);

  int panel_count() const { return static_cast<int>(panel_order.size()); }
  int hop_count() const { return panel_order.empty() ? 0 : panel_count() - 1; }
  double hop_latency_us() const { return per_hop_latency_us + kCableLatencyUsPerM * inter_panel_distance_m; }
  void validate() const;
};

struct HopRecord {
  int from_panel = 0;
  int to_panel = 0;
  int payload_complex_values = 0;
  std::size_t payload_bytes = 0;  // serialized message, header included
  double cumulative_latency_us = 0.0;
};

struct PanelInput {
  CMatrixXd h;  // N x K
  CVectorXd y;  // N
};

struct ChainResult {
  CVectorXd equalized;
  std::vector<HopRecord> hops;
};

/// Complex values per aggregation message: K for MRC, K + K(K+1)/2 with a packed Gramian.
constexpr int payload_complex_values(int users, EqualizerKind kind) {
  return users + (needs_gramian(kind) ? users * (users + 1) / 2 : 0);
}

/// Bytes ahead of the payload: user count, equalizer kind, panels absorbed (uint32 each).
inline constexpr std::size_t kMessageHeaderBytes = 12;

struct ChainMessage {
  EqualizerKind kind = EqualizerKind::MRC;
  AggregateState<double> state;
};

/// Little-endian wire image: header, then z as interleaved (re, im) doubles, then for ZF/MMSE the
/// Gramian's upper triangle packed row by row.
std::vector<std::uint8_t> serialize_message(const AggregateState<double>& state, EqualizerKind kind);
ChainMessage deserialize_message(std::span<const std::uint8_t> bytes);

/// Runs the daisy chain. `panel_inputs` is indexed by panel id; the topology fixes the visiting
/// order. The first panel sends its local sums, each following panel absorbs and forwards, and
/// the last panel finalizes.
ChainResult run_chain(const ChainTopology& topology, std::span<const PanelInput> panel_inputs, EqualizerKind kind,
                      double noise_power);

/// Per-hop cost times P - 1, plus cable propagation when a hop distance is set.
double fronthaul_latency(const ChainTopology& topology);

/// Splits an M x K channel and M-vector into consecutive blocks of rows, one per panel.
std::vector<PanelInput> split_by_panel(const CMatrixXd& h, const CVectorXd& y, int panel_count);

/// Columns: hop,from_panel,to_panel,payload_complex_values,payload_bytes,cumulative_us
void write_hops_csv(std::ostream& out, std::span<const HopRecord> hops);

}  // namespace lis

#endif  // LIS_CHAIN_HPP

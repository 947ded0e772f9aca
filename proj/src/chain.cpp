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

#include "lis/chain.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>
#include <ostream>

namespace lis {

ChainTopology ChainTopology::linear(int panel_count) {
  if (panel_count < 1) throw InvalidArgument("a chain needs at least one panel");
  ChainTopology t;
  t.panel_order.resize(panel_count);
  std::iota(t.panel_order.begin(), t.panel_order.end(), 0);
  return t;
}

void ChainTopology::validate() const {
  if (panel_order.empty()) throw InvalidArgument("empty chain");
  std::vector<int> sorted = panel_order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    if (sorted[i] != i) throw InvalidArgument("panel order must be a permutation of 0..P-1");
  }
  if (!(per_hop_latency_us >= 0.0)) throw InvalidArgument("per-hop latency must be non-negative");
  if (!(inter_panel_distance_m >= 0.0)) throw InvalidArgument("inter-panel distance must be non-negative");
}

namespace {

class Writer {
 public:
  explicit Writer(std::size_t reserve) { bytes_.reserve(reserve); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void complex(std::complex<double> v) {
    f64(v.real());
    f64(v.imag());
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  std::complex<double> complex() {
    const double re = f64();
    return {re, f64()};
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw InvalidArgument("truncated chain message");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_message(const AggregateState<double>& state, EqualizerKind kind) {
  const auto users = static_cast<int>(state.users());
  if (needs_gramian(kind) && !state.has_gramian()) {
    throw InvalidArgument("ZF/MMSE message needs the aggregated Gramian");
  }
  Writer w(kMessageHeaderBytes + 16 * static_cast<std::size_t>(payload_complex_values(users, kind)));
  w.u32(static_cast<std::uint32_t>(users));
  w.u32(static_cast<std::uint32_t>(kind));
  w.u32(static_cast<std::uint32_t>(state.panels_absorbed));
  for (int i = 0; i < users; ++i) w.complex(state.z_mrc_sum(i));
  if (needs_gramian(kind)) {
    for (int i = 0; i < users; ++i) {
      for (int j = i; j < users; ++j) w.complex(state.gramian_sum(i, j));
    }
  }
  return w.take();
}

ChainMessage deserialize_message(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto users = static_cast<int>(r.u32());
  const std::uint32_t kind_tag = r.u32();
  if (kind_tag > static_cast<std::uint32_t>(EqualizerKind::MMSE)) {
    throw InvalidArgument(fmt::format("unknown equalizer tag {} in chain message", kind_tag));
  }
  ChainMessage msg;
  msg.kind = static_cast<EqualizerKind>(kind_tag);
  msg.state = AggregateState<double>::zero(users, needs_gramian(msg.kind));
  msg.state.panels_absorbed = static_cast<int>(r.u32());
  for (int i = 0; i < users; ++i) msg.state.z_mrc_sum(i) = r.complex();
  if (needs_gramian(msg.kind)) {
    for (int i = 0; i < users; ++i) {
      for (int j = i; j < users; ++j) {
        const std::complex<double> v = r.complex();
        msg.state.gramian_sum(i, j) = v;
        msg.state.gramian_sum(j, i) = std::conj(v);
      }
    }
  }
  if (!r.done()) throw InvalidArgument("trailing bytes in chain message");
  return msg;
}

ChainResult run_chain(const ChainTopology& topology, std::span<const PanelInput> panel_inputs, EqualizerKind kind,
                      double noise_power) {
  topology.validate();
  if (static_cast<int>(panel_inputs.size()) != topology.panel_count()) {
    throw InvalidArgument(fmt::format("chain has {} panels but {} panel inputs were given", topology.panel_count(),
                                      panel_inputs.size()));
  }
  const Eigen::Index users = panel_inputs.front().h.cols();
  for (const PanelInput& in : panel_inputs) {
    if (in.h.cols() != users) throw InvalidArgument("panels disagree on the number of users");
  }

  const bool with_gramian = needs_gramian(kind);
  auto contribution = [&](int panel) {
    const PanelInput& in = panel_inputs[panel];
    return local_contribution(in.h, in.y, with_gramian, panel);
  };

  ChainResult result;
  result.hops.reserve(topology.hop_count());
  AggregateState<double> state =
      absorb(AggregateState<double>::zero(users, with_gramian), contribution(topology.panel_order.front()));
  for (int pos = 1; pos < topology.panel_count(); ++pos) {
    const int from = topology.panel_order[pos - 1];
    const int to = topology.panel_order[pos];
    const std::vector<std::uint8_t> wire = serialize_message(state, kind);
    result.hops.push_back({from, to, payload_complex_values(static_cast<int>(users), kind), wire.size(),
                           pos * topology.hop_latency_us()});

    ChainMessage received = deserialize_message(wire);
    state = absorb(std::move(received.state), contribution(to));
  }
  result.equalized = finalize(state, kind, noise_power);
  return result;
}

double fronthaul_latency(const ChainTopology& topology) { return topology.hop_count() * topology.hop_latency_us(); }

std::vector<PanelInput> split_by_panel(const CMatrixXd& h, const CVectorXd& y, int panel_count) {
  if (panel_count < 1 || h.rows() % panel_count != 0) {
    throw InvalidArgument(fmt::format("cannot split {} antennas into {} equal panels", h.rows(), panel_count));
  }
  if (y.size() != h.rows()) throw InvalidArgument("receive vector length must match channel rows");
  const Eigen::Index n = h.rows() / panel_count;
  std::vector<PanelInput> out;
  out.reserve(panel_count);
  for (int p = 0; p < panel_count; ++p) {
    out.push_back({h.middleRows(p * n, n), y.segment(p * n, n)});
  }
  return out;
}

void write_hops_csv(std::ostream& out, std::span<const HopRecord> hops) {
  out << "hop,from_panel,to_panel,payload_complex_values,payload_bytes,cumulative_us\n";
  for (std::size_t i = 0; i < hops.size(); ++i) {
    const HopRecord& h = hops[i];
    fmt::print(out, "{},{},{},{},{},{:.6f}\n", i, h.from_panel, h.to_panel, h.payload_complex_values,
               h.payload_bytes, h.cumulative_latency_us);
  }
}

}  // namespace lis

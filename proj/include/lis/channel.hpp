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

#ifndef LIS_CHANNEL_HPP
#define LIS_CHANNEL_HPP

#include "lis/scenario.hpp"
#include "lis/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace lis {

struct ChannelParams {
  double rician_factor_linear = db_to_linear(5.0);
  double noise_power = 1.0;
  double target_snr_linear = db_to_linear(10.0);

  void validate() const {
    if (!(rician_factor_linear >= 0.0)) throw InvalidArgument("Rician factor must be non-negative");
    if (!(noise_power > 0.0)) throw InvalidArgument("noise power must be positive");
    if (!(target_snr_linear > 0.0)) throw InvalidArgument("target SNR must be positive");
  }
};

template <typename Real>
struct ChannelRealization {
  CMatrix<Real> h;      // M x K
  CMatrix<Real> h_los;  // M x K
  Real noise_power{};
};

/// Near-field line-of-sight gain between one antenna element and one user.
///
/// Spherical wavefront: the exact distance d sets both the 1/d spreading and the phase
/// exp(-j 2 pi d / lambda). Only the component of the incident power perpendicular to the
/// element is absorbed, so the amplitude carries an extra sqrt(cos theta), clamped to zero
/// for users behind the panel.
template <typename Real = double>
std::complex<Real> los_entry(const Point3& antenna_pos, const Point3& antenna_normal, const Point3& ue_pos,
                             double wavelength_m) {
  const Point3 delta = ue_pos - antenna_pos;
  const double d = delta.norm();
  if (!(d > 0.0)) {
    throw InvalidArgument("user coincides with an antenna element");
  }
  const double cos_theta = antenna_normal.dot(delta) / d;
  if (cos_theta <= 0.0) {
    return {};
  }
  const double cycles = d / wavelength_m;
  const double phase = -2.0 * kPi * (cycles - std::floor(cycles));
  return std::polar(static_cast<Real>(std::sqrt(cos_theta) / d), static_cast<Real>(phase));
}

template <typename Real = double>
CMatrix<Real> build_los_matrix(const AntennaArray& array, const UePlacement& ues, double wavelength_m) {
  if (array.size() == 0 || ues.size() == 0) {
    throw InvalidArgument("line-of-sight matrix needs at least one antenna and one user");
  }
  CMatrix<Real> h(array.size(), ues.size());
  for (int k = 0; k < ues.size(); ++k) {
    for (int m = 0; m < array.size(); ++m) {
      h(m, k) = los_entry<Real>(array.positions[m], array.normals[m], ues.positions[k], wavelength_m);
    }
  }
  return h;
}

/// Rician draw H = sqrt(KF / (1 + KF)) H_los + sqrt(1 / (1 + KF)) H_r, where every entry of
/// H_r is an independent CN(0, |H_los(m, k)|^2) sample.
template <typename Derived>
auto sample_channel(const Eigen::MatrixBase<Derived>& h_los, const ChannelParams& params, std::uint64_t rng_seed)
    -> ChannelRealization<typename Derived::RealScalar> {
  using Real = typename Derived::RealScalar;
  params.validate();
  const Real kf = static_cast<Real>(params.rician_factor_linear);
  const Real los_weight = std::sqrt(kf / (Real(1) + kf));
  const Real scatter_weight = std::sqrt(Real(1) / (Real(1) + kf));

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<Real> gauss(Real(0), Real(1));

  ChannelRealization<Real> out;
  out.h_los = h_los;
  out.noise_power = static_cast<Real>(params.noise_power);
  out.h.resize(h_los.rows(), h_los.cols());
  const Real half = std::sqrt(Real(0.5));
  for (Eigen::Index k = 0; k < h_los.cols(); ++k) {
    for (Eigen::Index m = 0; m < h_los.rows(); ++m) {
      const std::complex<Real> los = h_los(m, k);
      const Real re = gauss(rng);
      const Real im = gauss(rng);
      const std::complex<Real> scatter = std::abs(los) * half * std::complex<Real>(re, im);
      out.h(m, k) = los_weight * los + scatter_weight * scatter;
    }
  }
  return out;
}

/// Mean over users of ||h_k||^2 / M, i.e. the per-antenna receive power of one scenario.
template <typename Derived>
double mean_antenna_power(const Eigen::MatrixBase<Derived>& h) {
  if (h.size() == 0) throw InvalidArgument("empty channel matrix");
  return static_cast<double>(h.squaredNorm()) / static_cast<double>(h.rows() * h.cols());
}

/// Common amplitude scale for a compared set of scenarios, given each scenario's
/// mean_antenna_power(). After scaling every channel by the result, the set-average
/// per-antenna SNR equals params.target_snr_linear.
inline double normalization_from_powers(std::span<const double> scenario_powers, const ChannelParams& params) {
  params.validate();
  if (scenario_powers.empty()) throw InvalidArgument("normalization needs at least one scenario");
  double sum = 0.0;
  for (double p : scenario_powers) sum += p;
  const double mean = sum / static_cast<double>(scenario_powers.size());
  if (!(mean > 0.0)) throw InvalidArgument("all channels in the normalization set are zero");
  return std::sqrt(params.target_snr_linear * params.noise_power / mean);
}

/// Same as normalization_from_powers over a range of M x K line-of-sight matrices.
template <typename MatrixRange>
double normalize_scenario_set(const MatrixRange& los_matrices, const ChannelParams& params) {
  std::vector<double> powers;
  for (const auto& h : los_matrices) powers.push_back(mean_antenna_power(h));
  return normalization_from_powers(powers, params);
}

/// y = H s + n with n ~ CN(0, N0 I).
template <typename DerivedH, typename DerivedS>
auto receive_vector(const Eigen::MatrixBase<DerivedH>& h, const Eigen::MatrixBase<DerivedS>& symbols,
                    double noise_power, std::uint64_t rng_seed) -> CVector<typename DerivedH::RealScalar> {
  using Real = typename DerivedH::RealScalar;
  if (symbols.cols() != 1 || symbols.rows() != h.cols()) {
    throw InvalidArgument("symbol vector length must match the number of channel columns");
  }
  if (noise_power < 0.0) throw InvalidArgument("noise power must be non-negative");
  CVector<Real> y = h * symbols;
  if (noise_power > 0.0) {
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<Real> gauss(Real(0), static_cast<Real>(std::sqrt(noise_power / 2.0)));
    for (Eigen::Index m = 0; m < y.size(); ++m) {
      const Real re = gauss(rng);
      const Real im = gauss(rng);
      y(m) += std::complex<Real>(re, im);
    }
  }
  return y;
}

}  // namespace lis

#endif  // LIS_CHANNEL_HPP

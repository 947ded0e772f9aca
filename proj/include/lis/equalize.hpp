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

#ifndef LIS_EQUALIZE_HPP
#define LIS_EQUALIZE_HPP

#include "lis/types.hpp"

#include <string>
#include <string_view>

namespace lis {

enum class EqualizerKind { MRC, ZF, MMSE };

inline constexpr EqualizerKind kAllKinds[] = {EqualizerKind::MRC, EqualizerKind::ZF, EqualizerKind::MMSE};

inline std::string_view to_string(EqualizerKind kind) {
  switch (kind) {
    case EqualizerKind::MRC: return "MRC";
    case EqualizerKind::ZF: return "ZF";
    case EqualizerKind::MMSE: return "MMSE";
  }
  return "?";
}

EqualizerKind parse_equalizer_kind(std::string_view name);

/// ZF and MMSE need the aggregated Gramian; MRC only the combined vector.
inline constexpr bool needs_gramian(EqualizerKind kind) { return kind != EqualizerKind::MRC; }

/// Gramians whose reciprocal condition number falls below this are rejected as singular.
inline constexpr double kSingularRcond = 1e-12;

/// H^H H, Hermitian by construction (lower triangle mirrored, real diagonal).
template <typename Derived>
CMatrix<typename Derived::RealScalar> gramian(const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  const Eigen::Index k = h.cols();
  CMatrix<Real> g = CMatrix<Real>::Zero(k, k);
  g.template selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint());
  CMatrix<Real> full = g.template selfadjointView<Eigen::Lower>();
  for (Eigen::Index i = 0; i < k; ++i) full(i, i) = full(i, i).real();
  return full;
}

namespace detail {

/// Solves (G + loading I) X = rhs through a Cholesky factorization.
template <typename Real, typename DerivedRhs>
CMatrix<Real> solve_regularized(const CMatrix<Real>& g, double loading, const Eigen::MatrixBase<DerivedRhs>& rhs) {
  CMatrix<Real> a = g;
  if (loading != 0.0) a.diagonal().array() += static_cast<Real>(loading);
  Eigen::LLT<CMatrix<Real>> llt(a);
  if (llt.info() != Eigen::Success) throw SingularGramian(0.0);
  const double rcond = static_cast<double>(llt.rcond());
  if (!(rcond >= kSingularRcond)) throw SingularGramian(rcond);
  return llt.solve(rhs);
}

inline double diagonal_loading(EqualizerKind kind, double noise_power) {
  return kind == EqualizerKind::MMSE ? noise_power : 0.0;
}

}  // namespace detail

/// Centralized K x M equalization matrix: H^H, (H^H H)^-1 H^H or (H^H H + N0 I)^-1 H^H.
template <typename Derived>
CMatrix<typename Derived::RealScalar> equalizer_matrix(EqualizerKind kind, const Eigen::MatrixBase<Derived>& h,
                                                       double noise_power) {
  using Real = typename Derived::RealScalar;
  if (kind == EqualizerKind::MRC) return h.adjoint();
  const CMatrix<Real> g = gramian(h);
  return detail::solve_regularized(g, detail::diagonal_loading(kind, noise_power), h.adjoint());
}

/// What one panel contributes to the chain: H_p^H y_p and, for ZF/MMSE, H_p^H H_p.
template <typename Real>
struct LocalContribution {
  CVector<Real> z_mrc_local;
  CMatrix<Real> gramian_local;  // empty when the equalizer does not need it
  int panel_id = 0;

  Eigen::Index users() const { return z_mrc_local.size(); }
  bool has_gramian() const { return gramian_local.size() != 0; }
};

template <typename DerivedH, typename DerivedY>
LocalContribution<typename DerivedH::RealScalar> local_contribution(const Eigen::MatrixBase<DerivedH>& h_p,
                                                                     const Eigen::MatrixBase<DerivedY>& y_p,
                                                                     bool need_gramian, int panel_id = 0) {
  if (y_p.cols() != 1 || y_p.rows() != h_p.rows()) {
    throw InvalidArgument("panel receive vector length must match the panel channel rows");
  }
  LocalContribution<typename DerivedH::RealScalar> out;
  out.z_mrc_local = h_p.adjoint() * y_p;
  if (need_gramian) out.gramian_local = gramian(h_p);
  out.panel_id = panel_id;
  return out;
}

/// Running sums carried along the daisy chain.
template <typename Real>
struct AggregateState {
  CVector<Real> z_mrc_sum;
  CMatrix<Real> gramian_sum;
  int panels_absorbed = 0;

  static AggregateState zero(Eigen::Index users, bool with_gramian) {
    AggregateState s;
    s.z_mrc_sum = CVector<Real>::Zero(users);
    if (with_gramian) s.gramian_sum = CMatrix<Real>::Zero(users, users);
    return s;
  }

  Eigen::Index users() const { return z_mrc_sum.size(); }
  bool has_gramian() const { return gramian_sum.size() != 0; }
};

template <typename Real>
AggregateState<Real> absorb(AggregateState<Real> state, const LocalContribution<Real>& contribution) {
  if (contribution.users() != state.users()) {
    throw InvalidArgument("contribution user count " + std::to_string(contribution.users()) +
                          " does not match aggregate " + std::to_string(state.users()));
  }
  if (state.has_gramian() && !contribution.has_gramian()) {
    throw InvalidArgument("contribution lacks the Gramian the aggregate carries");
  }
  state.z_mrc_sum += contribution.z_mrc_local;
  if (state.has_gramian()) state.gramian_sum += contribution.gramian_local;
  ++state.panels_absorbed;
  return state;
}

/// Equalized K-vector from fully aggregated sums.
template <typename Real>
CVector<Real> finalize(const AggregateState<Real>& state, EqualizerKind kind, double noise_power) {
  if (kind == EqualizerKind::MRC) return state.z_mrc_sum;
  if (!state.has_gramian()) throw InvalidArgument("ZF/MMSE finalization needs the aggregated Gramian");
  return detail::solve_regularized(state.gramian_sum, detail::diagonal_loading(kind, noise_power), state.z_mrc_sum);
}

}  // namespace lis

#endif  // LIS_EQUALIZE_HPP

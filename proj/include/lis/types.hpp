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

#ifndef LIS_TYPES_HPP
#define LIS_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lis {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Point3 = Eigen::Vector3d;

using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Raised for invalid geometry, configuration or argument shapes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a Gramian (or its regularized form) cannot be inverted reliably.
class SingularGramian : public std::runtime_error {
 public:
  explicit SingularGramian(double rcond)
      : std::runtime_error("Gramian is singular (reciprocal condition " + std::to_string(rcond) + ")"),
        rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Derives an independent RNG seed for stream `stream` and index `index` from a master seed.
/// Distinct (stream, index) pairs give decorrelated generators even for adjacent indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

}  // namespace lis

#endif  // LIS_TYPES_HPP

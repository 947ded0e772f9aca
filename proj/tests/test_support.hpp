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

#ifndef LIS_TESTS_SUPPORT_HPP
#define LIS_TESTS_SUPPORT_HPP

#include "lis/types.hpp"
#include "oracles.hpp"

#include <random>

namespace testing {

inline lis::CMatrixXd to_matrix(const oracle::Grid& g) {
  lis::CMatrixXd m(g.size(), g.front().size());
  for (std::size_t r = 0; r < g.size(); ++r) {
    for (std::size_t c = 0; c < g[r].size(); ++c) m(r, c) = g[r][c];
  }
  return m;
}

inline oracle::Grid to_grid(const lis::CMatrixXd& m) {
  oracle::Grid g(m.rows(), std::vector<std::complex<double>>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) g[r][c] = m(r, c);
  }
  return g;
}

inline lis::CMatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  return to_matrix(oracle::random_grid(rng, rows, cols));
}

inline double relative_error(const lis::CMatrixXd& got, const lis::CMatrixXd& want) {
  return (got - want).norm() / want.norm();
}

}  // namespace testing

#endif  // LIS_TESTS_SUPPORT_HPP

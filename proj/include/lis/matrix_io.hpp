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

#ifndef LIS_MATRIX_IO_HPP
#define LIS_MATRIX_IO_HPP

#include "lis/types.hpp"

#include <iosfwd>

namespace lis {

// Text matrix format for cross-checking channels against other tools. First line "M,K"; then
// M rows, each holding K entries as interleaved re,im with round-trip precision.
void write_matrix_csv(std::ostream& out, const CMatrixXd& matrix);
CMatrixXd read_matrix_csv(std::istream& in);

}  // namespace lis

#endif  // LIS_MATRIX_IO_HPP

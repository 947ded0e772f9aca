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

#include "lis/equalize.hpp"
#include "lis/matrix_io.hpp"
#include "lis/types.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lis {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64((master + index) ^ splitmix64(stream));
}

EqualizerKind parse_equalizer_kind(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "MRC") return EqualizerKind::MRC;
  if (upper == "ZF") return EqualizerKind::ZF;
  if (upper == "MMSE") return EqualizerKind::MMSE;
  throw InvalidArgument(fmt::format("unknown equalizer '{}', expected MRC, ZF or MMSE", name));
}

void write_matrix_csv(std::ostream& out, const CMatrixXd& matrix) {
  fmt::print(out, "{},{}\n", matrix.rows(), matrix.cols());
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out << ',';
      fmt::print(out, "{:.17g},{:.17g}", matrix(r, c).real(), matrix(r, c).imag());
    }
    out << '\n';
  }
}

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw InvalidArgument(fmt::format("matrix CSV: cannot parse '{}'", cell));
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

CMatrixXd read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("matrix CSV: missing header");
  const std::vector<double> header = parse_row(line);
  if (header.size() != 2 || header[0] < 0 || header[1] < 0) throw InvalidArgument("matrix CSV: header must be M,K");
  const auto rows = static_cast<Eigen::Index>(header[0]);
  const auto cols = static_cast<Eigen::Index>(header[1]);
  CMatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw InvalidArgument(fmt::format("matrix CSV: missing row {}", r));
    const std::vector<double> values = parse_row(line);
    if (static_cast<Eigen::Index>(values.size()) != 2 * cols) {
      throw InvalidArgument(fmt::format("matrix CSV: row {} has {} values, expected {}", r, values.size(), 2 * cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = {values[2 * c], values[2 * c + 1]};
  }
  return m;
}

}  // namespace lis

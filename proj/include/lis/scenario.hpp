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

#ifndef LIS_SCENARIO_HPP
#define LIS_SCENARIO_HPP

#include "lis/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lis {

/// Rectangular room with the footprint [0, length] x [0, width]; the two long walls lie at
/// y = 0 and y = width. Height is unbounded.
struct RoomSpec {
  double length_m = 30.0;
  double width_m = 20.0;
  double carrier_hz = 3.2e9;

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
  void validate() const;
};

/// A planar rows x cols grid of antennas. Column index runs along the wall, row index upward.
struct PanelSpec {
  Point3 origin = Point3::Zero();      // lower-left antenna
  Point3 normal = Point3::UnitY();     // unit, into the room
  int rows = 1;
  int cols = 1;
  double spacing_m = 0.0;

  /// Unit vector along the panel width: normal x up.
  Point3 width_axis() const;
  Point3 antenna_position(int row, int col) const;
  Point3 center() const;
  int antenna_count() const { return rows * cols; }
  void validate() const;
};

struct AntennaArray {
  std::vector<PanelSpec> panels;
  std::vector<Point3> positions;
  std::vector<Point3> normals;
  std::vector<int> panel_index;

  int panel_count() const { return static_cast<int>(panels.size()); }
  int antennas_per_panel() const { return panels.empty() ? 0 : panels.front().antenna_count(); }
  int size() const { return static_cast<int>(positions.size()); }

  /// Antenna rows [first, first + antennas_per_panel) belong to panel p.
  int first_antenna(int panel) const { return panel * antennas_per_panel(); }
};

struct UePlacement {
  std::vector<Point3> positions;
  double plane_height_m = 1.5;

  int size() const { return static_cast<int>(positions.size()); }
};

struct PanelShape {
  int rows;
  int cols;
};

/// Shape of a panel holding `antennas` elements: square for even powers of two, otherwise
/// twice as wide as high. Throws InvalidArgument when `antennas` is not a power of two.
PanelShape panel_shape(int antennas);

struct LayoutOptions {
  double plane_height_m = 1.5;
  /// Distance of the antenna plane from its wall. Keeps every element strictly inside the
  /// footprint; zero places panels on the wall surface itself.
  double wall_standoff_m = -1.0;  // negative: quarter wavelength
};

/// Splits `total_antennas` into `panel_count` equal panels on the two long walls. One panel sits
/// centered on the wall y = 0; otherwise panel_count / 2 panels face each other on each wall,
/// centered at (i + 1/2) * length / (panel_count / 2).
AntennaArray build_wall_layout(const RoomSpec& room, int total_antennas, int panel_count,
                               const LayoutOptions& options = {});

/// `k` users drawn uniformly over the floor rectangle inset 10 wavelengths from every wall.
UePlacement place_users(const RoomSpec& room, int k, double plane_height_m, std::uint64_t rng_seed);

/// Columns: antenna_id,panel_id,x,y,z,nx,ny,nz
void write_geometry_csv(std::ostream& out, const AntennaArray& array);

}  // namespace lis

#endif  // LIS_SCENARIO_HPP

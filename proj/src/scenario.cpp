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

#include "lis/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <bit>
#include <cmath>
#include <ostream>
#include <random>

namespace lis {

void RoomSpec::validate() const {
  if (!(length_m > 0.0) || !(width_m > 0.0)) {
    throw InvalidArgument(fmt::format("room dimensions must be positive, got {} x {} m", length_m, width_m));
  }
  if (!(carrier_hz > 0.0)) {
    throw InvalidArgument(fmt::format("carrier frequency must be positive, got {} Hz", carrier_hz));
  }
}

Point3 PanelSpec::width_axis() const { return normal.cross(Point3::UnitZ()); }

Point3 PanelSpec::antenna_position(int row, int col) const {
  return origin + spacing_m * (col * width_axis() + row * Point3::UnitZ());
}

Point3 PanelSpec::center() const {
  return origin + 0.5 * spacing_m * ((cols - 1) * width_axis() + (rows - 1) * Point3::UnitZ());
}

void PanelSpec::validate() const {
  if (rows < 1 || cols < 1) {
    throw InvalidArgument(fmt::format("panel needs at least one row and column, got {}x{}", rows, cols));
  }
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("panel normal must be a unit vector");
  }
  if (std::abs(normal.z()) > 1e-12) {
    throw InvalidArgument("panel normal must be horizontal (wall-mounted panels only)");
  }
  if (!(spacing_m > 0.0)) {
    throw InvalidArgument("antenna spacing must be positive");
  }
}

PanelShape panel_shape(int antennas) {
  if (antennas < 1 || !std::has_single_bit(static_cast<unsigned>(antennas))) {
    throw InvalidArgument(fmt::format(
        "antennas per panel must be a power of two to form a square or 2:1 grid, got {}", antennas));
  }
  const int exponent = std::countr_zero(static_cast<unsigned>(antennas));
  const int rows = 1 << (exponent / 2);
  return {rows, antennas / rows};
}

namespace {

void append_panel(AntennaArray& array, const PanelSpec& panel) {
  const int id = array.panel_count();
  array.panels.push_back(panel);
  for (int r = 0; r < panel.rows; ++r) {
    for (int c = 0; c < panel.cols; ++c) {
      array.positions.push_back(panel.antenna_position(r, c));
      array.normals.push_back(panel.normal);
      array.panel_index.push_back(id);
    }
  }
}

PanelSpec make_panel(double center_x, double wall_y, const Point3& normal, PanelShape shape, double spacing,
                     double height) {
  PanelSpec panel;
  panel.normal = normal;
  panel.rows = shape.rows;
  panel.cols = shape.cols;
  panel.spacing_m = spacing;
  const Point3 bottom_center(center_x, wall_y, height);
  panel.origin = bottom_center - 0.5 * (shape.cols - 1) * spacing * panel.width_axis();
  panel.validate();
  return panel;
}

}  // namespace

AntennaArray build_wall_layout(const RoomSpec& room, int total_antennas, int panel_count,
                               const LayoutOptions& options) {
  room.validate();
  if (panel_count < 1 || total_antennas < 1) {
    throw InvalidArgument(fmt::format("need positive antenna and panel counts, got M={} P={}", total_antennas,
                                      panel_count));
  }
  if (total_antennas % panel_count != 0) {
    throw InvalidArgument(
        fmt::format("M={} antennas cannot be split evenly over P={} panels", total_antennas, panel_count));
  }
  if (panel_count > 1 && panel_count % 2 != 0) {
    throw InvalidArgument(fmt::format("panels are split evenly over two walls, P={} is odd", panel_count));
  }
  const PanelShape shape = panel_shape(total_antennas / panel_count);
  const double spacing = room.wavelength_m() / 2.0;
  const double standoff = options.wall_standoff_m < 0.0 ? room.wavelength_m() / 4.0 : options.wall_standoff_m;
  if (standoff >= room.width_m / 2.0) {
    throw InvalidArgument("wall standoff leaves no room between the walls");
  }

  const int per_wall = panel_count == 1 ? 1 : panel_count / 2;
  const double pitch = room.length_m / per_wall;
  const double footprint = shape.cols * spacing;
  if (footprint > pitch) {
    throw InvalidArgument(fmt::format("{} panels of width {:.4f} m overlap on a {} m wall", per_wall, footprint,
                                      room.length_m));
  }

  AntennaArray array;
  array.positions.reserve(total_antennas);
  const Point3 into_room_low = Point3::UnitY();
  const Point3 into_room_high = -Point3::UnitY();
  for (int i = 0; i < per_wall; ++i) {
    const double x = (i + 0.5) * pitch;
    append_panel(array, make_panel(x, standoff, into_room_low, shape, spacing, options.plane_height_m));
  }
  if (panel_count > 1) {
    for (int i = 0; i < per_wall; ++i) {
      const double x = (i + 0.5) * pitch;
      append_panel(array,
                   make_panel(x, room.width_m - standoff, into_room_high, shape, spacing, options.plane_height_m));
    }
  }
  return array;
}

UePlacement place_users(const RoomSpec& room, int k, double plane_height_m, std::uint64_t rng_seed) {
  room.validate();
  if (k < 1) {
    throw InvalidArgument(fmt::format("need at least one user, got {}", k));
  }
  const double inset = 10.0 * room.wavelength_m();
  if (room.length_m <= 2.0 * inset || room.width_m <= 2.0 * inset) {
    throw InvalidArgument(fmt::format("room {} x {} m has no area {:.4f} m away from the walls", room.length_m,
                                      room.width_m, inset));
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> along(inset, room.length_m - inset);
  std::uniform_real_distribution<double> across(inset, room.width_m - inset);

  UePlacement ues;
  ues.plane_height_m = plane_height_m;
  ues.positions.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double x = along(rng);
    const double y = across(rng);
    ues.positions.emplace_back(x, y, plane_height_m);
  }
  return ues;
}

void write_geometry_csv(std::ostream& out, const AntennaArray& array) {
  out << "antenna_id,panel_id,x,y,z,nx,ny,nz\n";
  for (int m = 0; m < array.size(); ++m) {
    const Point3& p = array.positions[m];
    const Point3& n = array.normals[m];
    fmt::print(out, "{},{},{:.9f},{:.9f},{:.9f},{:.6f},{:.6f},{:.6f}\n", m, array.panel_index[m], p.x(), p.y(),
               p.z(), n.x(), n.y(), n.z());
  }
}

}  // namespace lis

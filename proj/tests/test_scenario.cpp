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

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace lis;

TEST_CASE("room wavelength follows the carrier") {
  RoomSpec room;
  CHECK(room.wavelength_m() == doctest::Approx(299792458.0 / 3.2e9).epsilon(1e-12));
  room.carrier_hz = 0.0;
  CHECK_THROWS_AS(room.validate(), InvalidArgument);
}

TEST_CASE("panel shapes are square or twice as wide") {
  CHECK(panel_shape(1).rows == 1);
  CHECK(panel_shape(2).rows == 1);
  CHECK(panel_shape(2).cols == 2);
  CHECK(panel_shape(16).rows == 4);
  CHECK(panel_shape(16).cols == 4);
  CHECK(panel_shape(32).rows == 4);
  CHECK(panel_shape(32).cols == 8);
  CHECK(panel_shape(1024).rows == 32);
  CHECK_THROWS_AS(panel_shape(12), InvalidArgument);
  CHECK_THROWS_AS(panel_shape(0), InvalidArgument);
}

TEST_CASE("single 32x32 panel for M=1024, P=1") {
  const RoomSpec room;
  const AntennaArray a = build_wall_layout(room, 1024, 1);
  REQUIRE(a.panel_count() == 1);
  CHECK(a.panels[0].rows == 32);
  CHECK(a.panels[0].cols == 32);
  CHECK(a.size() == 1024);
}

TEST_CASE("32 panels of 8 wide by 4 high for M=1024, P=32") {
  const AntennaArray a = build_wall_layout(RoomSpec{}, 1024, 32);
  REQUIRE(a.panel_count() == 32);
  for (const PanelSpec& p : a.panels) {
    CHECK(p.cols == 8);
    CHECK(p.rows == 4);
  }
}

TEST_CASE("4x4 single panel geometry") {
  const RoomSpec room;
  const AntennaArray a = build_wall_layout(room, 16, 1);
  REQUIRE(a.size() == 16);
  const double spacing = room.wavelength_m() / 2.0;
  CHECK(a.panels[0].center().x() == doctest::Approx(room.length_m / 2.0));
  for (int m = 0; m < 16; ++m) CHECK((a.normals[m] - a.normals[0]).norm() == 0.0);
  // Row-major grid: neighbours along a row and along a column are one spacing apart.
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const Point3& here = a.positions[r * 4 + c];
      if (c + 1 < 4) CHECK((a.positions[r * 4 + c + 1] - here).norm() == doctest::Approx(spacing).epsilon(1e-12));
      if (r + 1 < 4) CHECK((a.positions[(r + 1) * 4 + c] - here).norm() == doctest::Approx(spacing).epsilon(1e-12));
    }
  }
}

TEST_CASE("layout rejections") {
  const RoomSpec room;
  CHECK_THROWS_AS(build_wall_layout(room, 96, 2), InvalidArgument);    // 48 per panel
  CHECK_THROWS_AS(build_wall_layout(room, 100, 3), InvalidArgument);   // does not divide
  CHECK_THROWS_AS(build_wall_layout(room, 48, 3), InvalidArgument);    // odd P
  // 64 wide panels (2048 = 32 x 64) at pitch 30 m / 1 fit; 8 per wall of 64 wide do not in a 10 m room.
  RoomSpec small = room;
  small.length_m = 10.0;
  CHECK_THROWS_AS(build_wall_layout(small, 16 * 2048, 16), InvalidArgument);
}

TEST_CASE("layout invariants over valid (M, P)") {
  const RoomSpec room;
  for (int m : {16, 64, 128, 512, 1024}) {
    for (int p = 1; p <= m && p <= 256; p *= 2) {
      CAPTURE(m);
      CAPTURE(p);
      const AntennaArray a = build_wall_layout(room, m, p);
      int total = 0;
      for (const PanelSpec& panel : a.panels) total += panel.rows * panel.cols;
      CHECK(total == m);
      CHECK(a.size() == m);
      CHECK(a.antennas_per_panel() * a.panel_count() == m);
      for (int i = 0; i < a.size(); ++i) {
        const Point3& pos = a.positions[i];
        CHECK(pos.x() > 0.0);
        CHECK(pos.x() < room.length_m);
        CHECK(pos.y() > 0.0);
        CHECK(pos.y() < room.width_m);
        CHECK(pos.z() >= 1.5);
        CHECK(a.panel_index[i] == i / a.antennas_per_panel());
      }
      if (p >= 2) {
        std::multiset<double> low, high;
        std::vector<double> low_centers;
        for (const PanelSpec& panel : a.panels) {
          const double x = std::round(panel.center().x() * 1e9) / 1e9;
          (panel.normal.y() > 0 ? low : high).insert(x);
          if (panel.normal.y() > 0) low_centers.push_back(panel.center().x());
        }
        CHECK(low == high);
        std::sort(low_centers.begin(), low_centers.end());
        for (std::size_t i = 2; i < low_centers.size(); ++i) {
          CHECK(std::abs((low_centers[i] - low_centers[i - 1]) - (low_centers[1] - low_centers[0])) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("facing panels point at each other") {
  const AntennaArray a = build_wall_layout(RoomSpec{}, 64, 4);
  REQUIRE(a.panel_count() == 4);
  CHECK(a.panels[0].normal.y() == 1.0);
  CHECK(a.panels[2].normal.y() == -1.0);
  CHECK(a.panels[0].center().x() == doctest::Approx(a.panels[2].center().x()));
}

TEST_CASE("users stay 10 wavelengths off the walls") {
  const RoomSpec room;
  const double inset = 10.0 * room.wavelength_m();
  CHECK(inset == doctest::Approx(0.936851).epsilon(1e-5));
  const UePlacement ues = place_users(room, 5000, 1.5, 7);
  REQUIRE(ues.size() == 5000);
  for (const Point3& u : ues.positions) {
    CHECK(u.x() >= inset);
    CHECK(u.x() <= room.length_m - inset);
    CHECK(u.y() >= inset);
    CHECK(u.y() <= room.width_m - inset);
    CHECK(u.z() == 1.5);
  }
}

TEST_CASE("placement determinism and seed sensitivity") {
  const RoomSpec room;
  CHECK(place_users(room, 1, 1.5, 42).positions[0] == place_users(room, 1, 1.5, 42).positions[0]);
  const UePlacement a = place_users(room, 128, 1.5, 1);
  const UePlacement b = place_users(room, 128, 1.5, 2);
  bool differs = false;
  for (int i = 0; i < 128; ++i) differs |= a.positions[i] != b.positions[i];
  CHECK(differs);
}

TEST_CASE("placement rejections") {
  RoomSpec tiny;
  tiny.length_m = 1.5;
  tiny.width_m = 1.0;
  CHECK_THROWS_AS(place_users(tiny, 1, 1.5, 0), InvalidArgument);
  CHECK_THROWS_AS(place_users(RoomSpec{}, 0, 1.5, 0), InvalidArgument);
}

TEST_CASE("geometry CSV") {
  const AntennaArray a = build_wall_layout(RoomSpec{}, 8, 2);
  std::ostringstream out;
  write_geometry_csv(out, a);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "antenna_id,panel_id,x,y,z,nx,ny,nz");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);
}

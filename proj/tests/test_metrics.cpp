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

#include "lis/metrics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace lis;
using testing::random_matrix;

TEST_CASE("single-user matched filter SINR") {
  CMatrixXd h(2, 1);
  h << std::complex<double>(1.0, 1.0), std::complex<double>(1.0, -1.0);  // ||h||^2 = 4
  const CMatrixXd w = h.adjoint();
  CHECK(user_sinr(w.row(0), h, 0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(user_sinr(CVectorXd(h.col(0).conjugate()), h, 0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(user_sinr(CVectorXd::Zero(2), h, 0, 1.0) == 0.0);
  CHECK_THROWS_AS(user_sinr(CVectorXd::Zero(3), h, 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(user_sinr(w.row(0), h, 1, 1.0), InvalidArgument);
}

TEST_CASE("noiseless ZF removes interference") {
  std::mt19937_64 rng(51);
  const CMatrixXd h = random_matrix(rng, 16, 4);
  const CMatrixXd w = equalizer_matrix(EqualizerKind::ZF, h, 0.0);
  const CMatrixXd wh = w * h;
  for (int k = 0; k < 4; ++k) {
    double interference = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j != k) interference += std::norm(wh(k, j));
    }
    CHECK(interference / std::norm(wh(k, k)) < 1e-18);
    CHECK(user_sinr(w.row(k), h, k, 0.0) > 1e12);
  }
}

TEST_CASE("analytic SINR matches the Monte-Carlo moment oracle") {
  std::mt19937_64 rng(52);
  const oracle::Grid g = oracle::random_grid(rng, 8, 2);
  const CMatrixXd h = testing::to_matrix(g);
  const double n0 = 0.4;
  for (EqualizerKind kind : kAllKinds) {
    const CMatrixXd w = equalizer_matrix(kind, h, n0);
    const oracle::Grid wg = testing::to_grid(w);
    for (int k = 0; k < 2; ++k) {
      const double measured = oracle::monte_carlo_sinr(wg, g, k, n0, 100000, 77 + k);
      CHECK(user_sinr(w.row(k), h, k, n0) == doctest::Approx(measured).epsilon(0.02));
    }
  }
}

TEST_CASE("batched SINR equals per-row SINR") {
  std::mt19937_64 rng(53);
  const CMatrixXd h = random_matrix(rng, 12, 5);
  for (EqualizerKind kind : kAllKinds) {
    const CMatrixXd w = equalizer_matrix(kind, h, 0.3);
    const Eigen::VectorXd all = sinr_all(w, h, 0.3);
    for (int k = 0; k < 5; ++k) CHECK(all(k) == doctest::Approx(user_sinr(w.row(k), h, k, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("SINR is invariant to a common channel and noise scale") {
  std::mt19937_64 rng(54);
  const CMatrixXd h = random_matrix(rng, 10, 3);
  const double beta = 37.5;
  for (EqualizerKind kind : kAllKinds) {
    const Eigen::VectorXd a = sinr_all(equalizer_matrix(kind, h, 0.2), h, 0.2);
    const CMatrixXd hs = beta * h;
    const Eigen::VectorXd b = sinr_all(equalizer_matrix(kind, hs, 0.2 * beta * beta), hs, 0.2 * beta * beta);
    CHECK(((a - b).array().abs() / a.array()).maxCoeff() < 1e-12);
  }
}

TEST_CASE("spectral efficiency") {
  CHECK(spectral_efficiency(0.0) == 0.0);
  CHECK(spectral_efficiency(1.0) == 1.0);
  CHECK(spectral_efficiency(4.0) == doctest::Approx(2.321928094887362).epsilon(1e-15));
  CHECK_THROWS_AS(spectral_efficiency(-0.1), InvalidArgument);
}

TEST_CASE("percentiles interpolate linearly and are monotone") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(percentile_of_sorted(v, 0.0) == 1.0);
  CHECK(percentile_of_sorted(v, 100.0) == 5.0);
  CHECK(percentile_of_sorted(v, 50.0) == 3.0);
  CHECK(percentile_of_sorted(v, 5.0) == doctest::Approx(1.2));
  CHECK_THROWS_AS(percentile_of_sorted(v, 101.0), InvalidArgument);
  CHECK_THROWS_AS(percentile_of_sorted({}, 5.0), InvalidArgument);

  std::mt19937_64 rng(55);
  std::vector<SeSample> samples(10);
  for (int i = 0; i < 10; ++i) {
    samples[i].placement_id = i / 5;
    for (int k = 0; k < 7; ++k) samples[i].per_user_se.push_back(std::uniform_real_distribution<double>(0, 5)(rng));
  }
  const std::vector<double> qs{1, 5, 10, 25, 50, 75, 99};
  const SeSummary s = summarize(samples, qs);
  CHECK(s.n_samples == 70);
  CHECK(s.n_placements == 2);
  double previous = -1.0;
  for (double q : qs) {
    CHECK(s.percentile(q) >= previous);
    previous = s.percentile(q);
  }
}

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.users = 4;
  spec.points = {{"a", 1, 32}, {"b", 2, 32}, {"c", 4, 32}};
  spec.placements = 3;
  spec.fading_draws = 8;
  spec.master_seed = 17;
  spec.threads = 1;
  return spec;
}

}  // namespace

TEST_CASE("degenerate sweep equals one hand-built sample") {
  SweepSpec spec = small_spec();
  spec.points = {{"one", 2, 32}};
  spec.placements = 1;
  spec.fading_draws = 1;
  const SweepResult r = run_sweep(spec);

  const AntennaArray array = build_wall_layout(spec.room, 32, 2);
  const UePlacement ues = place_users(spec.room, 4, 1.5, derive_seed(17, kPlacementStream, 0));
  const CMatrixXd los = build_los_matrix(array, ues, spec.room.wavelength_m());
  const std::vector<CMatrixXd> set{los};
  const double beta = normalize_scenario_set(set, spec.channel);
  CHECK(r.beta == doctest::Approx(beta).epsilon(1e-14));
  const auto ch = sample_channel(CMatrixXd(beta * los), spec.channel, derive_seed(17, kFadingStream, 0));
  for (std::size_t i = 0; i < spec.kinds.size(); ++i) {
    const Eigen::VectorXd sinr = sinr_all(equalizer_matrix(spec.kinds[i], ch.h, 1.0), ch.h, 1.0);
    SeSample sample;
    for (int k = 0; k < 4; ++k) sample.per_user_se.push_back(spectral_efficiency(sinr(k)));
    const std::vector<SeSample> one{sample};
    const SeSummary expected = summarize(one, spec.percentiles);
    CHECK(r.summaries[i].mean_user_se == doctest::Approx(expected.mean_user_se).epsilon(1e-12));
    CHECK(r.summaries[i].percentile(5.0) == doctest::Approx(expected.percentile(5.0)).epsilon(1e-12));
    CHECK(r.summaries[i].n_samples == 4);
  }
}

TEST_CASE("MMSE dominates ZF and MRC under common random numbers") {
  const SweepResult r = run_sweep(small_spec());
  for (std::size_t point = 0; point < 3; ++point) {
    const SeSummary& mrc = r.summaries[3 * point + 0];
    const SeSummary& zf = r.summaries[3 * point + 1];
    const SeSummary& mmse = r.summaries[3 * point + 2];
    CHECK(mmse.mean_user_se >= zf.mean_user_se - 1e-9);
    CHECK(mmse.mean_user_se >= mrc.mean_user_se - 1e-9);
  }
}

TEST_CASE("sweep is reproducible and independent of the thread count") {
  SweepSpec spec = small_spec();
  const SweepResult a = run_sweep(spec);
  spec.threads = 3;
  const SweepResult b = run_sweep(spec);
  std::ostringstream sa, sb;
  write_summary_csv(sa, a.summaries);
  write_summary_csv(sb, b.summaries);
  CHECK(sa.str() == sb.str());
  CHECK(a.beta == b.beta);
  spec.master_seed = 18;
  std::ostringstream sc;
  write_summary_csv(sc, run_sweep(spec).summaries);
  CHECK(sc.str() != sa.str());
}

TEST_CASE("singular draws are counted, not silently dropped") {
  SweepSpec spec = small_spec();
  spec.users = 8;
  spec.points = {{"tiny", 1, 4}};
  const SweepResult r = run_sweep(spec);
  const SeSummary& zf = r.summaries[1];
  CHECK(zf.kind == EqualizerKind::ZF);
  CHECK(zf.singular_draws == spec.placements * spec.fading_draws);
  CHECK(zf.n_samples == 0);
  const SeSummary& mmse = r.summaries[2];
  CHECK(mmse.singular_draws == 0);
  CHECK(mmse.n_samples == static_cast<std::size_t>(8 * spec.placements * spec.fading_draws));
}

TEST_CASE("sweep rejects bad geometry with the configuration named") {
  SweepSpec spec = small_spec();
  spec.points = {{"bad", 3, 48}};
  try {
    run_sweep(spec);
    FAIL("expected rejection");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
}

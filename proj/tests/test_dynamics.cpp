#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstring>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spinphoton/dynamics.hpp"
#include "spinphoton/emission.hpp"
#include "spinphoton/errors.hpp"
#include "spinphoton/parallel.hpp"

using namespace spinphoton;
using ML = MatterLevel;

namespace {

DynamicsOptions window(double t_end, int n_times, double dt_max = 0.05) {
  DynamicsOptions o;
  o.t_end = t_end;
  o.n_times = n_times;
  o.dt_max = dt_max;
  return o;
}

PureState trion_x(const CompositeBasis& b) {
  const double r = 1.0 / std::sqrt(2.0);
  return PureState::matter_state(b, {0.0, 0.0, r, r});
}

}  // namespace

TEST_CASE("empty cavity photon decays at 2 kappa") {
  SystemParams p;
  p.g = 0.0;
  p.delta = 0.0;
  p.photon_cutoff = 1;
  const auto rho0 = DensityOperator::from_pure(PureState::basis_state(CompositeBasis(1), ML::ElectronUp, 1, 0));
  const auto r = evolve_lindblad(rho0, p, window(5.0, 51));
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    CHECK(std::abs(r.series.n_plus[k] - std::exp(-2.0 * r.series.t[k])) < 1e-6);
  }
}

TEST_CASE("single photon beats between circular modes") {
  SystemParams p;
  p.g = 0.0;
  p.delta = 1.0;
  p.photon_cutoff = 1;
  const auto rho0 = DensityOperator::from_pure(PureState::basis_state(CompositeBasis(1), ML::ElectronUp, 1, 0));
  const auto r = evolve_lindblad(rho0, p, window(4.0, 81));
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    const auto amp = oracle::single_photon(1.0, 1.0, r.series.t[k]);
    CHECK(std::abs(r.series.n_plus[k] - std::norm(amp[0])) < 1e-7);
    CHECK(std::abs(r.series.n_minus[k] - std::norm(amp[1])) < 1e-7);
  }
}

TEST_CASE("trion population decays as exp(-2 gamma t)") {
  SystemParams p;
  p.g = 0.15;
  p.delta = 1.0;
  p.photon_cutoff = 1;
  const double gamma = decay_rate(p);
  CHECK(gamma == doctest::Approx(0.01125).epsilon(1e-12));
  const auto rho0 = DensityOperator::from_pure(PureState::basis_state(CompositeBasis(1), ML::TrionUp));
  const auto r = evolve_lindblad(rho0, p, window(1.0 / gamma, 90, 0.5));
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    CHECK(std::abs(r.series.n_tr[k] - std::exp(-2.0 * gamma * r.series.t[k])) < 1e-2);
  }
}

TEST_CASE("Lindblad trace and positivity over random parameters") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 6; ++k) {
    SystemParams p;
    p.delta = u(rng);
    p.omega_0 = u(rng);
    p.g = 0.1 + 0.1 * std::abs(u(rng));
    p.photon_cutoff = 2;
    const CompositeBasis b(2);
    const auto psi = apply_coherent_kick(PureState::electron_in_plane(b), cplx(0.3 * u(rng), 0.1), 0.2 * u(rng), 1e-2);
    const auto r = evolve_lindblad(DensityOperator::from_pure(psi), p, window(6.0, 31));
    for (double tr : r.series.trace) CHECK(std::abs(tr - 1.0) < 1e-8);
    CHECK(r.min_eigenvalue > -1e-8);
    CHECK_NOTHROW(r.series.validate());
    CHECK(std::abs(r.final_state.trace() - 1.0) < 1e-8);
  }
}

TEST_CASE("sweet-spot emission keeps unit concurrence") {
  for (double delta : {0.5, 1.0, 2.0}) {
    SystemParams p;
    p.delta = delta;
    p.photon_cutoff = 1;
    const auto r = evolve_lindblad(DensityOperator::from_pure(trion_x(CompositeBasis(1))), p, window(40.0, 81, 0.2));
    int checked = 0;
    for (std::size_t k = 1; k < r.series.size(); ++k) {
      if (std::isnan(r.series.concurrence[k])) continue;
      CHECK(std::abs(r.series.concurrence[k] - 1.0) < 0.02);
      ++checked;
    }
    CHECK(checked > 70);
  }
}

TEST_CASE("pure trion gives zero concurrence") {
  SystemParams p;
  p.photon_cutoff = 1;
  const auto r = evolve_lindblad(DensityOperator::from_pure(PureState::basis_state(CompositeBasis(1), ML::TrionUp)),
                                 p, window(10.0, 11));
  for (std::size_t k = 1; k < r.series.size(); ++k) CHECK(r.series.concurrence[k] < 1e-8);
  CHECK(std::isnan(r.series.concurrence[0]));
  CHECK_FALSE(eph_concurrence_from_rho(
                  DensityOperator::from_pure(PureState::basis_state(CompositeBasis(1), ML::TrionUp)), p)
                  .has_value());
}

TEST_CASE("detuned emission concurrence equals Fc") {
  SystemParams p;
  p.delta = 1.0;
  p.omega_0 = 1.0;
  p.photon_cutoff = 1;
  const double fc = std::sqrt(5.0) / 3.0;
  const auto r = evolve_lindblad(DensityOperator::from_pure(trion_x(CompositeBasis(1))), p, window(30.0, 31, 0.2));
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    if (r.series.t[k] < 5.0) continue;
    CHECK(r.series.concurrence[k] == doctest::Approx(fc).epsilon(0.01 / fc));
  }
  const auto c = eph_concurrence_from_rho(r.final_state, p);
  REQUIRE(c.has_value());
  CHECK(std::abs(*c - fc) < 0.01);
}

TEST_CASE("emission plateau matches the single-excitation photon numbers") {
  SystemParams p;
  p.g = 0.1;
  p.delta = 1.0;
  p.photon_cutoff = 1;
  const auto r = evolve_lindblad(DensityOperator::from_pure(PureState::basis_state(CompositeBasis(1), ML::TrionUp)),
                                 p, window(20.0, 21, 0.2));
  const auto [np, nm] = photon_numbers(emission_amplitudes(p, 1.0, 0.0));
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    if (r.series.t[k] < 8.0) continue;
    CHECK(r.series.n_plus[k] / r.series.n_tr[k] == doctest::Approx(np).epsilon(0.02));
    CHECK(r.series.n_minus[k] / r.series.n_tr[k] == doctest::Approx(nm).epsilon(0.02));
  }
}

TEST_CASE("vacuum trajectory never jumps") {
  SystemParams p;
  p.g = 0.0;
  p.photon_cutoff = 2;
  const auto psi = PureState::electron_in_plane(CompositeBasis(2));
  const auto rec = run_trajectory(psi, p, window(10.0, 11), 5);
  CHECK(rec.jumps.empty());
  CHECK((rec.final_state.amplitudes - psi.amplitudes).norm() < 1e-10);
}

TEST_CASE("single-photon jump statistics") {
  SystemParams p;
  p.g = 0.0;
  p.delta = 0.0;
  p.photon_cutoff = 1;
  const auto psi = PureState::basis_state(CompositeBasis(1), ML::ElectronUp, 1, 0);
  const auto o = window(20.0, 3, 0.1);
  double sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const auto rec = run_trajectory(psi, p, o, derive_seed(99, i));
    REQUIRE(rec.jumps.size() == 1);
    CHECK(rec.jumps[0].channel == 0);
    sum += rec.jumps[0].t;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("trajectory records are ordered, monotone and reproducible") {
  SystemParams p;
  p.delta = 1.0;
  p.photon_cutoff = 2;
  const auto psi = apply_coherent_kick(PureState::electron_in_plane(CompositeBasis(2)), 0.8, 0.0, 5e-2);
  const auto o = window(6.0, 121);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto a = run_trajectory(psi, p, o, seed);
    const auto b = run_trajectory(psi, p, o, seed);
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (std::size_t j = 0; j < a.jumps.size(); ++j) {
      CHECK(a.jumps[j].t == b.jumps[j].t);
      CHECK(a.jumps[j].channel == b.jumps[j].channel);
      CHECK(a.jumps[j].t > 0.0);
      CHECK(a.jumps[j].t <= o.t_end);
      if (j > 0) CHECK(a.jumps[j].t > a.jumps[j - 1].t);
    }
    CHECK(a.final_state.amplitudes == b.final_state.amplitudes);
    for (std::size_t k = 1; k < a.snapshots.size(); ++k) {
      const bool jumped = std::any_of(a.jumps.begin(), a.jumps.end(), [&](const JumpEvent& e) {
        return e.t > a.times[k - 1] && e.t <= a.times[k];
      });
      if (!jumped) CHECK(a.snapshots[k].norm <= a.snapshots[k - 1].norm + 1e-12);
      CHECK(a.snapshots[k].n_plus == b.snapshots[k].n_plus);
    }
  }
}

TEST_CASE("a single averaged trajectory equals its record") {
  SystemParams p;
  p.delta = 1.0;
  const auto psi = apply_coherent_kick(PureState::electron_in_plane(CompositeBasis(2)), 0.5, 0.0, 1e-2);
  const auto o = window(4.0, 41);
  const auto avg = average_trajectories(psi, p, o, 1, 17);
  const auto one = trajectory_series(run_trajectory(psi, p, o, derive_seed(17, 0)));
  CHECK(avg.n_plus == one.n_plus);
  CHECK(avg.n_minus == one.n_minus);
  CHECK(avg.n_tr == one.n_tr);
  for (std::size_t k = 0; k < avg.size(); ++k) {
    if (std::isnan(one.concurrence[k])) {
      CHECK(std::isnan(avg.concurrence[k]));
    } else {
      CHECK(avg.concurrence[k] == doctest::Approx(one.concurrence[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("standard errors scale as one over root n") {
  SystemParams p;
  p.g = 0.0;
  p.delta = 1.0;
  p.photon_cutoff = 1;
  const auto psi = PureState::basis_state(CompositeBasis(1), ML::ElectronUp, 1, 0);
  const auto o = window(2.0, 21, 0.1);
  const auto a = average_trajectories(psi, p, o, 100, 3);
  const auto b = average_trajectories(psi, p, o, 400, 3);
  std::vector<double> ratios;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.stderr_n_plus[k] > 1e-6 && b.stderr_n_plus[k] > 1e-6) ratios.push_back(a.stderr_n_plus[k] / b.stderr_n_plus[k]);
  }
  REQUIRE(ratios.size() > 10);
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
  CHECK(mean == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("beating period of the pumped cavity is pi over delta") {
  SystemParams p;
  p.delta = 1.0;
  p.photon_cutoff = 2;
  const auto psi = apply_coherent_kick(PureState::electron_in_plane(CompositeBasis(2)), 0.5, 0.0, 1e-2);
  const auto s = average_trajectories(psi, p, window(5.0, 1001), 50, 1);
  std::vector<double> minima;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    if (s.n_plus[k] < s.n_plus[k - 1] && s.n_plus[k] <= s.n_plus[k + 1]) {
      const double y0 = s.n_plus[k - 1];
      const double y1 = s.n_plus[k];
      const double y2 = s.n_plus[k + 1];
      const double h = s.t[k] - s.t[k - 1];
      minima.push_back(s.t[k] + 0.5 * h * (y0 - y2) / (y0 - 2.0 * y1 + y2));
    }
  }
  REQUIRE(minima.size() >= 2);
  CHECK(minima[1] - minima[0] == doctest::Approx(std::numbers::pi).epsilon(0.02));
}

TEST_CASE("trajectory average agrees with the master equation") {
  SystemParams p;
  p.delta = 1.0;
  p.photon_cutoff = 2;
  const auto psi = apply_coherent_kick(PureState::electron_in_plane(CompositeBasis(2)), 0.7, cplx(0.0, -0.3), 5e-2);
  const auto o = window(8.0, 17);
  const auto lind = evolve_lindblad(DensityOperator::from_pure(psi), p, o).series;
  const auto traj = average_trajectories(psi, p, o, 2000, 7);
  for (std::size_t k = 0; k < o.n_times; ++k) {
    CHECK(std::abs(traj.n_plus[k] - lind.n_plus[k]) <= 3.0 * traj.stderr_n_plus[k] + 1e-8);
    CHECK(std::abs(traj.n_minus[k] - lind.n_minus[k]) <= 3.0 * traj.stderr_n_minus[k] + 1e-8);
    CHECK(std::abs(traj.n_tr[k] - lind.n_tr[k]) <= 3.0 * traj.stderr_n_tr[k] + 1e-8);
    CHECK(std::isnan(traj.concurrence[k]) == std::isnan(lind.concurrence[k]));
    if (!std::isnan(lind.concurrence[k])) {
      CHECK(std::abs(traj.concurrence[k] - lind.concurrence[k]) <= 3.0 * traj.stderr_concurrence[k] + 1e-8);
    }
  }
}

TEST_CASE("trajectory averages do not depend on the worker count") {
  SystemParams p;
  p.delta = 1.0;
  const auto psi = apply_coherent_kick(PureState::electron_in_plane(CompositeBasis(2)), 0.6, 0.0, 1e-2);
  const auto o = window(3.0, 31);
  const auto a = average_trajectories(psi, p, o, 40, 5, 1);
  const auto b = average_trajectories(psi, p, o, 40, 5, 3);
  CHECK(a.n_plus == b.n_plus);
  CHECK(a.stderr_n_tr == b.stderr_n_tr);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::memcmp(&a.concurrence[k], &b.concurrence[k], sizeof(double)) == 0);
  }
}

TEST_CASE("square pump pulse approaches the instantaneous kick") {
  SystemParams p;
  p.delta = 1.0;
  p.eps_plus = 0.5;
  p.photon_cutoff = 3;
  const CompositeBasis b(3);
  auto o = window(1.0, 11, 0.01);
  o.pulse_duration = kDefaultPulseDuration;
  const auto pulsed = evolve_lindblad(DensityOperator::from_pure(PureState::electron_in_plane(b)), p, o).series;
  const auto kicked = apply_coherent_kick(PureState::electron_in_plane(b), 0.5, 0.0, 1e-2);
  o.pulse_duration = 0.0;
  const auto ref = evolve_lindblad(DensityOperator::from_pure(kicked), p, o).series;
  for (std::size_t k = 1; k < ref.size(); ++k) {
    CHECK(pulsed.n_plus[k] == doctest::Approx(ref.n_plus[k]).epsilon(0.02));
  }
}

TEST_CASE("option and series validation") {
  DynamicsOptions o;
  o.t_end = -1.0;
  CHECK_THROWS_AS(o.validate(), InvalidParams);
  o = {};
  o.n_times = 1;
  CHECK_THROWS_AS(o.validate(), InvalidParams);
  TimeSeries s;
  s.t = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(s.validate(), InvalidParams);
  s.t = {0.0, 1.0};
  s.n_plus = {0.0};
  CHECK_THROWS_AS(s.validate(), InvalidParams);
  SystemParams p;
  CHECK_THROWS_AS(average_trajectories(PureState::electron_in_plane(CompositeBasis(2)), p, {}, 0, 1), InvalidParams);
  PureState unnormalized = PureState::electron_in_plane(CompositeBasis(2));
  unnormalized.amplitudes *= 2.0;
  CHECK_THROWS_AS(run_trajectory(unnormalized, p, {}, 1), InvalidParams);
}

#include "spinphoton/transmission.hpp"

#include <algorithm>
#include <cmath>

#include "spinphoton/errors.hpp"

namespace spinphoton {

std::pair<cplx, cplx> bare_transmissions(const SystemParams& params, double omega) {
  params.validate();
  const cplx ik(0.0, params.kappa);
  const cplx cavity = omega - params.omega_c + ik;
  const cplx t0 = ik / cavity;
  const double dw = omega - params.omega_0;
  if (params.g == 0.0) return {t0, t0};
  if (dw == 0.0) return {t0, 0.0};
  return {t0, ik / (cavity - params.g * params.g / dw)};
}

TransmissionMatrix transmission_matrix(const SystemParams& params, double omega, ElectronSpin spin) {
  const auto [t0, t1] = bare_transmissions(params, omega);
  const double r = params.delta / params.kappa;
  const cplx denom = 1.0 + r * r * t1 * t0;
  TransmissionMatrix t;
  t.near_singular = std::abs(denom) < 1e-12;
  const cplx coupled = t1 / denom;
  const cplx bare = t0 / denom;
  const cplx into_bare = -kI * r * coupled * t0;
  const cplx into_coupled = -kI * r * bare * t1;
  if (spin == ElectronSpin::Up) {
    t.t_pp = coupled;
    t.t_mm = bare;
    t.t_mp = into_bare;
    t.t_pm = into_coupled;
  } else {
    t.t_mm = coupled;
    t.t_pp = bare;
    t.t_pm = into_bare;
    t.t_mp = into_coupled;
  }
  return t;
}

double unpolarized_transmission(const TransmissionMatrix& t) {
  return 0.5 * (std::norm(t.t_pp) + std::norm(t.t_pm) + std::norm(t.t_mp) + std::norm(t.t_mm));
}

std::vector<double> unpolarized_transmission(const SystemParams& params, const std::vector<double>& omegas,
                                             ElectronSpin spin) {
  if (omegas.empty()) throw InvalidParams("transmission frequency grid is empty");
  std::vector<double> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(unpolarized_transmission(transmission_matrix(params, w, spin)));
  return out;
}

std::vector<double> default_frequency_grid(const SystemParams& params, int points) {
  if (points < 2) throw InvalidParams("frequency grid needs at least 2 points");
  const double half = std::max(5.0 * params.kappa, std::abs(params.delta) + 5.0 * params.kappa);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = params.omega_c - half + 2.0 * half * i / (points - 1);
  }
  return grid;
}

}  // namespace spinphoton

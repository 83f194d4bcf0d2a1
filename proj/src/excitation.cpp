#include "spinphoton/excitation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "spinphoton/errors.hpp"
#include "spinphoton/optimize.hpp"
#include "spinphoton/parallel.hpp"

namespace odeint = boost::numeric::odeint;

namespace spinphoton {

QDAmplitudes QDAmplitudes::electron_in_plane() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, 0.0, 0.0};
}

namespace {

// Rotating-frame (at omega_c) circular field seen by one branch:
// c~_s(t) = i e^{-kappa t} [eps_s cos(delta t) - i eps_{-s} sin(delta t)].
cplx rotating_circular_field(const SystemParams& p, cplx eps_same, cplx eps_other, double t) {
  const double c = std::cos(p.delta * t);
  const double s = std::sin(p.delta * t);
  return kI * std::exp(-p.kappa * t) * (eps_same * c - kI * eps_other * s);
}

// One two-level branch {electron s, trion s} in the interaction picture:
// a = psi_{s/2}, b = e^{i omega_0 t} psi_{3s/2},
// db/dt = -i u a, da/dt = -i u* b, u = g c~_s(t) e^{i (omega_0 - omega_c) t}.
using BranchState = std::array<double, 4>;

struct BranchSystem {
  double g, kappa, delta, detuning;
  cplx eps_same, eps_other;

  void operator()(const BranchState& x, BranchState& dxdt, double t) const {
    double sd, cd, sp, cp;
    sincos(delta * t, &sd, &cd);
    sincos(detuning * t, &sp, &cp);
    const cplx field = kI * std::exp(-kappa * t) * (eps_same * cd - kI * eps_other * sd);
    const cplx u = g * field * cplx(cp, sp);
    const cplx a(x[0], x[1]);
    const cplx b(x[2], x[3]);
    const cplx db = -kI * u * a;
    const cplx da = -kI * std::conj(u) * b;
    dxdt = {da.real(), da.imag(), db.real(), db.imag()};
  }
};

BranchSystem make_branch(const SystemParams& p, cplx eps_same, cplx eps_other) {
  return {p.g, p.kappa, p.delta, p.detuning(), eps_same, eps_other};
}

using BranchStepper = odeint::runge_kutta_dopri5<BranchState>;

// Integrates one branch; returns (psi_{1/2}, interaction-picture trion amplitude).
std::pair<cplx, cplx> integrate_branch(const BranchSystem& sys, cplx electron0, double t_end,
                                       const OdeTolerance& tol) {
  BranchState x{electron0.real(), electron0.imag(), 0.0, 0.0};
  if (t_end > 0.0 && std::norm(electron0) > 0.0) {
    odeint::integrate_adaptive(odeint::make_controlled<BranchStepper>(tol.abs, tol.rel), sys, x,
                               0.0, t_end, 1e-3);
  }
  return {cplx(x[0], x[1]), cplx(x[2], x[3])};
}

// Transfer probability of one branch starting from a unit electron amplitude.
double branch_transfer(const SystemParams& p, cplx eps_same, cplx eps_other, double t_end,
                       const OdeTolerance& tol) {
  return std::norm(integrate_branch(make_branch(p, eps_same, eps_other), 1.0, t_end, tol).second);
}

void check_initial(const QDAmplitudes& initial) {
  if (initial.t_up != cplx(0.0) || initial.t_down != cplx(0.0)) {
    throw InvalidParams("integrate_excitation expects zero initial trion amplitudes");
  }
}

bool near_zero(double x, double scale) { return std::abs(x) <= 1e-12 * std::max(1.0, scale); }

}  // namespace

std::pair<cplx, cplx> circular_cavity_field(const SystemParams& params, double t) {
  if (t < 0.0) throw InvalidParams("cavity_field requires t >= 0");
  const cplx lab = std::polar(1.0, -params.omega_c * t);
  return {lab * rotating_circular_field(params, params.eps_plus, params.eps_minus, t),
          lab * rotating_circular_field(params, params.eps_minus, params.eps_plus, t)};
}

std::pair<cplx, cplx> cavity_field(const SystemParams& params, double t) {
  if (t < 0.0) throw InvalidParams("cavity_field requires t >= 0");
  const double r = 1.0 / std::sqrt(2.0);
  const cplx h0 = kI * r * (params.eps_plus + params.eps_minus);
  const cplx v0 = r * (params.eps_plus - params.eps_minus);
  const double decay = std::exp(-params.kappa * t);
  return {h0 * std::polar(decay, -params.omega_h() * t), v0 * std::polar(decay, -params.omega_v() * t)};
}

QDAmplitudes integrate_excitation(const SystemParams& params, const QDAmplitudes& initial,
                                  double t_end, const OdeTolerance& tol) {
  require_fast_cavity(params, "integrate_excitation");
  check_initial(initial);
  if (t_end < 0.0) throw InvalidParams("integrate_excitation requires t_end >= 0");
  const auto up = integrate_branch(make_branch(params, params.eps_plus, params.eps_minus),
                                   initial.e_up, t_end, tol);
  const auto down = integrate_branch(make_branch(params, params.eps_minus, params.eps_plus),
                                     initial.e_down, t_end, tol);
  const cplx lab = std::polar(1.0, -params.omega_0 * t_end);
  return {up.first, down.first, lab * up.second, lab * down.second};
}

std::vector<QDAmplitudes> integrate_excitation_trace(const SystemParams& params,
                                                     const QDAmplitudes& initial,
                                                     const std::vector<double>& times,
                                                     const OdeTolerance& tol) {
  require_fast_cavity(params, "integrate_excitation_trace");
  check_initial(initial);
  if (times.empty()) return {};
  if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end())) {
    throw InvalidParams("sample times must be non-negative and non-decreasing");
  }
  std::vector<QDAmplitudes> out(times.size());
  const auto run = [&](const BranchSystem& sys, cplx e0, bool up) {
    std::vector<double> grid;
    grid.reserve(times.size() + 1);
    if (times.front() > 0.0) grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());
    const std::size_t offset = grid.size() - times.size();
    BranchState x{e0.real(), e0.imag(), 0.0, 0.0};
    std::size_t k = 0;
    const auto observe = [&](const BranchState& s, double t) {
      if (k >= offset) {
        const cplx lab = std::polar(1.0, -params.omega_0 * t);
        auto& slot = out[k - offset];
        (up ? slot.e_up : slot.e_down) = cplx(s[0], s[1]);
        (up ? slot.t_up : slot.t_down) = lab * cplx(s[2], s[3]);
      }
      ++k;
    };
    if (grid.back() == grid.front()) {
      for (std::size_t i = 0; i < grid.size(); ++i) observe(x, grid[i]);
      return;
    }
    odeint::integrate_times(odeint::make_controlled<BranchStepper>(tol.abs, tol.rel), sys, x,
                            grid.begin(), grid.end(), 1e-3, observe);
  };
  run(make_branch(params, params.eps_plus, params.eps_minus), initial.e_up, true);
  run(make_branch(params, params.eps_minus, params.eps_plus), initial.e_down, false);
  return out;
}

double rabi_population(const SystemParams& params, cplx eps) {
  params.validate();
  if (!near_zero(params.delta, params.kappa) || !near_zero(params.detuning(), params.kappa)) {
    throw RegimeError("rabi_population requires delta = 0 and omega_0 = omega_c");
  }
  const double s = std::sin(params.g * std::abs(eps) / params.kappa);
  return s * s;
}

double max_population_zero_delta(const SystemParams& params) {
  params.validate();
  if (!near_zero(params.delta, params.kappa)) {
    throw RegimeError("max_population_zero_delta requires delta = 0");
  }
  const double x = std::numbers::pi * params.detuning() / (2.0 * params.kappa);
  // sech overflows gracefully to 0 for large |x|.
  return 0.5 * (1.0 + 1.0 / std::cosh(x));
}

PumpFunctional pump_functional(const SystemParams& params, double t) {
  if (t < 0.0) throw InvalidParams("pump_functional requires t >= 0");
  const double ep = std::abs(params.eps_plus);
  const double em = std::abs(params.eps_minus);
  const double k = params.kappa;
  const double d = params.delta;
  double sd, cd;
  sincos(d * t, &sd, &cd);
  const double decay = std::exp(-k * t);
  // The sin(delta t) coefficient of the sigma- component is (|e_-| delta - |e_+| kappa):
  // it is fixed by E~(0) = 0 and dE~/dt(0) = (delta^2 + kappa^2) |e_-|.
  return {ep * k - em * d + ((em * d - ep * k) * cd + (ep * d + em * k) * sd) * decay,
          em * k + ep * d + ((-ep * d - em * k) * cd + (em * d - ep * k) * sd) * decay};
}

PumpFunctional pump_functional_limit(const SystemParams& params) {
  const double ep = std::abs(params.eps_plus);
  const double em = std::abs(params.eps_minus);
  return {ep * params.kappa - em * params.delta, em * params.kappa + ep * params.delta};
}

QDAmplitudes analytic_sweet_spot_amplitude(const SystemParams& params, const QDAmplitudes& initial,
                                           double t) {
  params.validate();
  check_initial(initial);
  if (!near_zero(params.detuning(), params.kappa)) {
    throw RegimeError("analytic sweet-spot solution requires omega_0 = omega_c");
  }
  const double scale = std::abs(params.eps_plus) + std::abs(params.eps_minus);
  const bool phases_ok = near_zero(params.eps_plus.imag(), scale) && params.eps_plus.real() >= 0.0 &&
                         near_zero(params.eps_minus.real(), scale) && params.eps_minus.imag() <= 0.0;
  if (!phases_ok) {
    throw RegimeError("analytic sweet-spot solution requires eps_+ = |eps_+| and eps_- = -i|eps_-|");
  }
  const auto e = pump_functional(params, t);
  const double denom = params.delta * params.delta + params.kappa * params.kappa;
  const double gp = params.g * e.plus / denom;
  const double gm = params.g * e.minus / denom;
  const cplx lab = std::polar(1.0, -params.omega_0 * t);
  return {initial.e_up * std::cos(gp), initial.e_down * std::cos(gm),
          lab * initial.e_up * std::sin(gp), -kI * lab * initial.e_down * std::sin(gm)};
}

PumpAmplitudes pi_pulse_amplitudes(const SystemParams& params) {
  params.validate();
  if (!(params.g > 0.0)) throw InvalidParams("pi_pulse_amplitudes requires g > 0");
  const double k = params.kappa;
  const double d = params.delta;
  const double unit = std::numbers::pi / (2.0 * params.g);
  // Both branches need g (|e_+-| kappa -+ |e_-+| delta) = s_+- (pi/2)(delta^2 + kappa^2)
  // with odd s_+-; |s| = 1 always admits a non-negative solution.
  if (std::abs(d) <= k) return {unit * (k + d), unit * (k - d)};
  if (d > k) return {unit * (d - k), unit * (k + d)};
  return {unit * (k - d), unit * (-k - d)};
}

MaxPopulationResult max_trion_population(const SystemParams& params, const OptimizerConfig& config,
                                         int workers) {
  require_fast_cavity(params, "max_trion_population");
  if (config.amplitude_points < 2 || config.phase_points < 1) {
    throw InvalidParams("optimizer grid needs >= 2 amplitude points and >= 1 phase point");
  }
  MaxPopulationResult result;
  if (params.g == 0.0) {
    result.final_state = QDAmplitudes::electron_in_plane();
    result.converged = true;
    return result;
  }
  const int na = config.amplitude_points;
  const double amax = config.amplitude_max_factor * params.kappa / params.g;
  const double da = amax / (na - 1);
  // phases[k] and phases[mirror[k]] are opposite; only the first `np` are candidates.
  std::vector<double> phases;
  std::vector<int> mirror;
  int np = config.phase_points;
  if (config.fixed_phase) {
    np = 1;
    phases = {*config.fixed_phase, -*config.fixed_phase};
    mirror = {1, 0};
  } else {
    for (int k = 0; k < np; ++k) {
      phases.push_back(2.0 * std::numbers::pi * k / np);
      mirror.push_back((np - k) % np);
    }
  }
  const int nt = static_cast<int>(phases.size());
  const double dphi = 2.0 * std::numbers::pi / config.phase_points;

  // P(i, j, k): sigma+ branch transfer with eps_same = a_i, eps_other = a_j e^{i phases[k]}.
  // The sigma- branch for (a_i, a_j, phi) is the sigma+ branch for (a_j, a_i, -phi),
  // up to a global phase, so one table serves both branches.
  const std::size_t entries = static_cast<std::size_t>(na) * na * nt;
  std::vector<double> table(entries);
  parallel_for(entries, workers, [&](std::size_t idx) {
    const int k = static_cast<int>(idx % nt);
    const int j = static_cast<int>((idx / nt) % na);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(nt) * na));
    table[idx] = branch_transfer(params, da * i, std::polar(da * j, phases[static_cast<std::size_t>(k)]),
                                 config.t_end, config.grid_ode);
  });
  const auto at = [&](int i, int j, int k) {
    return table[(static_cast<std::size_t>(i) * na + j) * nt + k];
  };
  const std::size_t cells = static_cast<std::size_t>(na) * na * np;
  std::vector<double> population(cells);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < np; ++k)
        population[(static_cast<std::size_t>(i) * na + j) * np + k] =
            0.5 * (at(i, j, k) + at(j, i, mirror[static_cast<std::size_t>(k)]));
  result.evaluations = static_cast<int>(entries);

  std::vector<std::size_t> order(cells);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int seeds = std::clamp(config.polish_seeds, 1, static_cast<int>(cells));
  std::partial_sort(order.begin(), order.begin() + seeds, order.end(),
                    [&](std::size_t l, std::size_t r) {
                      return population[l] > population[r] || (population[l] == population[r] && l < r);
                    });

  const auto objective = [&](std::span<const double> x) {
    const cplx ep = x[0];
    const cplx em = std::polar(x[1], config.fixed_phase ? *config.fixed_phase : x[2]);
    return -0.5 * (branch_transfer(params, ep, em, config.t_end, config.ode) +
                   branch_transfer(params, em, ep, config.t_end, config.ode));
  };

  double best = -1.0;
  std::vector<double> best_x;
  bool best_converged = false;
  for (int s = 0; s < seeds; ++s) {
    const std::size_t idx = order[static_cast<std::size_t>(s)];
    const int k = static_cast<int>(idx % np);
    const int j = static_cast<int>((idx / np) % na);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(np) * na));
    std::vector<double> start{da * i, da * j, phases[static_cast<std::size_t>(k)]};
    std::vector<double> step{0.5 * da, 0.5 * da, 0.5 * dphi};
    if (config.fixed_phase) {
      start.pop_back();
      step.pop_back();
    }
    const auto polished = nelder_mead_minimize(objective, start, step, config.polish_iterations,
                                               config.polish_tolerance);
    result.evaluations += 2 * polished.iterations;
    double value = -polished.value;
    std::vector<double> x = polished.x;
    if (population[idx] > value) {
      value = population[idx];
      x = start;
    }
    if (value > best) {
      best = value;
      best_x = x;
      best_converged = polished.converged;
    }
  }

  result.n_tr_max = std::clamp(best, 0.0, 1.0);
  result.converged = best_converged;
  // Report pumps with a non-negative sigma+ magnitude.
  cplx ep = best_x[0];
  cplx em = std::polar(best_x[1], config.fixed_phase ? *config.fixed_phase : best_x[2]);
  if (ep.real() < 0.0) {
    ep = -ep;
    em = -em;
  }
  result.eps_plus = ep;
  result.eps_minus = em;
  SystemParams tuned = params;
  tuned.eps_plus = ep;
  tuned.eps_minus = em;
  result.final_state = integrate_excitation(tuned, QDAmplitudes::electron_in_plane(), config.t_end, config.ode);
  return result;
}

}  // namespace spinphoton

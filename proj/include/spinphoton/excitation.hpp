#ifndef SPINPHOTON_EXCITATION_HPP
#define SPINPHOTON_EXCITATION_HPP

#include <optional>
#include <utility>
#include <vector>

#include "spinphoton/params.hpp"

namespace spinphoton {

/// Semiclassical quantum-dot amplitudes psi_{+-1/2} (electron) and
/// psi_{+-3/2} (trion), in the lab frame.
struct QDAmplitudes {
  cplx e_up{0.0};
  cplx e_down{0.0};
  cplx t_up{0.0};
  cplx t_down{0.0};

  double trion_population() const { return std::norm(t_up) + std::norm(t_down); }
  double up_branch_norm() const { return std::norm(e_up) + std::norm(t_up); }
  double down_branch_norm() const { return std::norm(e_down) + std::norm(t_down); }

  /// Electron with S_x = 1/2, no trion.
  static QDAmplitudes electron_in_plane();
};

/// Horizon of the excitation stage; the cavity intensity has decayed by
/// e^{-40} by then.
inline constexpr double kExcitationHorizon = 20.0;

/// Lab-frame classical linear-mode amplitudes <c_H(t)>, <c_V(t)> after the
/// delta pulse at t = 0.
std::pair<cplx, cplx> cavity_field(const SystemParams& params, double t);

/// Lab-frame circular components <c_+(t)>, <c_-(t)>.
std::pair<cplx, cplx> circular_cavity_field(const SystemParams& params, double t);

/// Integrates the four-amplitude excitation equations driven by the classical
/// cavity field from t = 0 to t_end. Requires zero initial trion amplitudes
/// and the fast-cavity regime.
QDAmplitudes integrate_excitation(const SystemParams& params, const QDAmplitudes& initial,
                                  double t_end = kExcitationHorizon, const OdeTolerance& tol = {});

/// Same integration, sampled at the (non-decreasing, non-negative) `times`.
std::vector<QDAmplitudes> integrate_excitation_trace(const SystemParams& params,
                                                     const QDAmplitudes& initial,
                                                     const std::vector<double>& times,
                                                     const OdeTolerance& tol = {});

/// sin^2(g |eps| / kappa): trion population of one branch for delta = 0 at
/// omega_0 = omega_c. Throws RegimeError elsewhere.
double rabi_population(const SystemParams& params, cplx eps);

/// (1 + sech(pi (omega_0 - omega_c) / (2 kappa))) / 2, valid at delta = 0.
double max_population_zero_delta(const SystemParams& params);

/// Accumulated pump functional E~_+-(t) of the sweet-spot solution.
struct PumpFunctional {
  double plus = 0.0;
  double minus = 0.0;
};

PumpFunctional pump_functional(const SystemParams& params, double t);
/// t -> infinity: |eps_+-| kappa -+ |eps_-+| delta.
PumpFunctional pump_functional_limit(const SystemParams& params);

/// Closed-form amplitudes at omega_0 = omega_c for pumps eps_+ = |eps_+|,
/// eps_- = -i |eps_-|. Returned in the same frame and phase convention as
/// integrate_excitation: psi_{+3/2} = e^{-i omega_0 t} psi_{+1/2}(0) sin(G_+),
/// psi_{-3/2} = -i e^{-i omega_0 t} psi_{-1/2}(0) sin(G_-), with
/// G_+- = g E~_+-(t) / (delta^2 + kappa^2). Throws RegimeError off the sweet
/// spot or for other pump phases.
QDAmplitudes analytic_sweet_spot_amplitude(const SystemParams& params, const QDAmplitudes& initial,
                                           double t);

struct PumpAmplitudes {
  double plus = 0.0;
  double minus = 0.0;

  /// (eps_+, eps_-) = (|eps_+|, -i |eps_-|).
  std::pair<cplx, cplx> with_sweet_spot_phases() const { return {plus, cplx(0.0, -minus)}; }
};

/// Smallest non-negative (|eps_+|, |eps_-|) giving complete excitation of both
/// branches at the sweet spot.
PumpAmplitudes pi_pulse_amplitudes(const SystemParams& params);

struct OptimizerConfig {
  int amplitude_points = 17;
  int phase_points = 8;
  /// Pump magnitudes are searched in [0, amplitude_max_factor * kappa / g].
  double amplitude_max_factor = 3.0 * 3.14159265358979323846;
  int polish_iterations = 200;
  double polish_tolerance = 1e-6;
  /// Number of best grid points used as simplex starting points.
  int polish_seeds = 1;
  /// Tolerance of the coarse grid stage and of the simplex polish.
  OdeTolerance grid_ode{1e-8, 1e-5};
  OdeTolerance ode{1e-10, 1e-7};
  double t_end = kExcitationHorizon;
  /// Pins arg(eps_-) - arg(eps_+) instead of searching over it.
  std::optional<double> fixed_phase;
};

struct MaxPopulationResult {
  double n_tr_max = 0.0;
  cplx eps_plus{0.0};
  cplx eps_minus{0.0};
  QDAmplitudes final_state;
  bool converged = false;  ///< false: best-found value returned with a warning
  int evaluations = 0;
};

/// Maximizes the final trion population over (|eps_+|, |eps_-|, relative
/// phase) for the in-plane initial electron: grid search, then Nelder-Mead.
MaxPopulationResult max_trion_population(const SystemParams& params,
                                         const OptimizerConfig& config = {}, int workers = 1);

}  // namespace spinphoton

#endif  // SPINPHOTON_EXCITATION_HPP

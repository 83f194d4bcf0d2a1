#ifndef SPINPHOTON_PARAMS_HPP
#define SPINPHOTON_PARAMS_HPP

#include <complex>
#include <string_view>

namespace spinphoton {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Model parameters. Frequencies are in units of the cavity amplitude decay
/// rate kappa and times in units of 1/kappa; kappa itself is kept as a field
/// so that formulas stay dimensionally explicit.
struct SystemParams {
  double omega_c = 0.0;   ///< central cavity frequency
  double delta = 1.0;     ///< half splitting of the H/V modes, omega_{H,V} = omega_c +- delta
  double omega_0 = 0.0;   ///< trion resonance
  double g = 0.15;        ///< light-matter coupling
  double kappa = 1.0;     ///< cavity amplitude decay rate (photon escape rate is 2 kappa)
  cplx eps_plus{0.0, 0.0};   ///< sigma+ pump amplitude of the delta pulse
  cplx eps_minus{0.0, 0.0};  ///< sigma- pump amplitude of the delta pulse
  int photon_cutoff = 2;     ///< max Fock occupation per circular mode
  double fast_cavity_threshold = 0.25;

  double detuning() const { return omega_0 - omega_c; }
  double omega_h() const { return omega_c + delta; }
  double omega_v() const { return omega_c - delta; }

  bool fast_cavity() const { return g <= fast_cavity_threshold * kappa; }

  /// Throws InvalidParams on kappa <= 0, g < 0, cutoff < 1 or non-finite fields.
  void validate() const;
};

/// Absolute and relative tolerance of the adaptive 4(5) Runge-Kutta integrators.
struct OdeTolerance {
  double abs = 1e-12;
  double rel = 1e-10;
};

/// Throws RegimeError naming `operation` unless params.fast_cavity().
void require_fast_cavity(const SystemParams& params, std::string_view operation);

}  // namespace spinphoton

#endif  // SPINPHOTON_PARAMS_HPP

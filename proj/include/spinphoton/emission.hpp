#ifndef SPINPHOTON_EMISSION_HPP
#define SPINPHOTON_EMISSION_HPP

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "spinphoton/params.hpp"

namespace spinphoton {

/// Stationary single-photon amplitudes during slow trion recombination,
/// in the frame rotating at omega_0. First index: electron spin, second:
/// circular polarization of the cavity photon.
struct EmissionAmplitudes {
  cplx up_plus{0.0};     ///< psi_{+1/2,+}
  cplx up_minus{0.0};    ///< psi_{+1/2,-}
  cplx down_plus{0.0};   ///< psi_{-1/2,+}
  cplx down_minus{0.0};  ///< psi_{-1/2,-}
};

EmissionAmplitudes emission_amplitudes(const SystemParams& params, cplx trion_up, cplx trion_down);

/// <c_+^dag c_+>, <c_-^dag c_->.
std::pair<double, double> photon_numbers(const EmissionAmplitudes& amplitudes);

/// Trion amplitude decay rate gamma = 1/2 sum_{H,V} g^2 kappa / ((omega_0 - omega_{H,V})^2 + kappa^2).
double decay_rate(const SystemParams& params);

/// Polarization geometry of the emitted photon.
struct PhotonQubit {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;  ///< rotation angle of the closest orthogonal basis
  double fc = 1.0;     ///< sqrt(1 - sin^2(2 alpha) sin^2(beta))

  /// <+~|-~> = sin(2 alpha) sin(beta).
  double overlap() const;
  /// |+~> (sign > 0) or |-~> in the {|+>, |->} basis.
  Eigen::Vector2cd tilde_state(int sign) const;
};

/// tan(alpha) = delta / sqrt(d^2 + kappa^2), tan(beta) = d / kappa with
/// d = omega_0 - omega_c; theta = atan2(2 kappa delta, d^2 + kappa^2 - delta^2).
PhotonQubit photon_state_angles(const SystemParams& params);

/// Trion pseudospin. J_x + i J_y = psi_{+3/2}^* psi_{-3/2}.
struct TrionSpin {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;

  double in_plane() const { return std::hypot(jx, jy); }

  static TrionSpin from_amplitudes(cplx trion_up, cplx trion_down);
  /// From a 2x2 trion density matrix in the {up, down} basis.
  static TrionSpin from_density(const Eigen::Matrix2cd& rho);
};

using TwoQubitState = Eigen::Vector4cd;
using TwoQubitDensity = Eigen::Matrix4cd;

/// psi_up |up, +~> + psi_down |down, -~> in the basis
/// |up +>, |up ->, |down +>, |down ->. Throws InvalidParams unless the trion
/// amplitudes are normalized to 1e-10.
TwoQubitState spin_photon_state(cplx trion_up, cplx trion_down, const PhotonQubit& photon);

/// 2 sqrt(J_x^2 + J_y^2) F_c.
double concurrence_analytic(const TrionSpin& spin, const PhotonQubit& photon);

/// Wootters concurrence. The input is normalized by its trace; throws
/// InvalidParams if it is not Hermitian or has eigenvalues below -1e-10.
double wootters_concurrence(const TwoQubitDensity& rho);

/// 2 |ad - bc| of a normalized pure state.
double pure_state_concurrence(const TwoQubitState& psi);

/// Stationary, normalized electron-photon density matrix produced by slow
/// trion recombination, built from the 2x2 trion density matrix.
TwoQubitDensity steady_eph_density(const SystemParams& params, const Eigen::Matrix2cd& trion_rho);

}  // namespace spinphoton

#endif  // SPINPHOTON_EMISSION_HPP

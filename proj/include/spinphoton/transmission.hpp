#ifndef SPINPHOTON_TRANSMISSION_HPP
#define SPINPHOTON_TRANSMISSION_HPP

#include <utility>
#include <vector>

#include "spinphoton/params.hpp"

namespace spinphoton {

/// Linear-response amplitude transmission coefficients for an electron
/// prepared spin-up. t_pm: sigma+ in, sigma- out; t_mp: sigma- in, sigma+ out.
struct TransmissionMatrix {
  cplx t_pp{0.0};
  cplx t_mm{0.0};
  cplx t_pm{0.0};
  cplx t_mp{0.0};
  /// |1 + delta^2 t_1 t_0 / kappa^2| < 1e-12.
  bool near_singular = false;
};

enum class ElectronSpin { Up, Down };

/// t_0 = i kappa / (omega - omega_c + i kappa) and
/// t_1 = i kappa / (omega - omega_c + i kappa - g^2 / (omega - omega_0)); t_1 = 0 at omega = omega_0
/// unless g = 0, where t_1 = t_0.
std::pair<cplx, cplx> bare_transmissions(const SystemParams& params, double omega);

/// For spin down the roles of sigma+ and sigma- are exchanged.
TransmissionMatrix transmission_matrix(const SystemParams& params, double omega,
                                       ElectronSpin spin = ElectronSpin::Up);

/// T = (|t_pp|^2 + |t_pm|^2 + |t_mp|^2 + |t_mm|^2) / 2.
double unpolarized_transmission(const TransmissionMatrix& t);
std::vector<double> unpolarized_transmission(const SystemParams& params, const std::vector<double>& omegas,
                                             ElectronSpin spin = ElectronSpin::Up);

/// 2001 points spanning omega_c +- max(5 kappa, |delta| + 5 kappa) by default.
std::vector<double> default_frequency_grid(const SystemParams& params, int points = 2001);

}  // namespace spinphoton

#endif  // SPINPHOTON_TRANSMISSION_HPP

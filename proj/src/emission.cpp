#include "spinphoton/emission.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spinphoton/errors.hpp"

namespace spinphoton {

EmissionAmplitudes emission_amplitudes(const SystemParams& params, cplx trion_up, cplx trion_down) {
  require_fast_cavity(params, "emission_amplitudes");
  const cplx d(params.detuning(), params.kappa);
  const cplx denom = d * d - params.delta * params.delta;
  if (std::abs(denom) < 1e-12) throw RegimeError("emission_amplitudes: singular denominator");
  const cplx same = params.g * d / denom;
  const cplx cross = params.g * params.delta / denom;
  return {same * trion_up, cross * trion_up, cross * trion_down, same * trion_down};
}

std::pair<double, double> photon_numbers(const EmissionAmplitudes& a) {
  return {std::norm(a.up_plus) + std::norm(a.down_plus), std::norm(a.up_minus) + std::norm(a.down_minus)};
}

double decay_rate(const SystemParams& params) {
  require_fast_cavity(params, "decay_rate");
  const double k2 = params.kappa * params.kappa;
  const double g2k = params.g * params.g * params.kappa;
  const double dh = params.omega_0 - params.omega_h();
  const double dv = params.omega_0 - params.omega_v();
  return 0.5 * (g2k / (dh * dh + k2) + g2k / (dv * dv + k2));
}

double PhotonQubit::overlap() const { return std::sin(2.0 * alpha) * std::sin(beta); }

Eigen::Vector2cd PhotonQubit::tilde_state(int sign) const {
  const cplx major = std::cos(alpha);
  const cplx minor = -kI * std::sin(alpha) * std::polar(1.0, beta);
  Eigen::Vector2cd v;
  if (sign > 0) {
    v << major, minor;
  } else {
    v << minor, major;
  }
  return v;
}

PhotonQubit photon_state_angles(const SystemParams& params) {
  params.validate();
  const double d = params.detuning();
  const double k = params.kappa;
  const double dl = params.delta;
  PhotonQubit q;
  q.alpha = std::atan(dl / std::hypot(d, k));
  q.beta = std::atan(d / k);
  q.theta = std::atan2(2.0 * k * dl, d * d + k * k - dl * dl);
  const double s = std::sin(2.0 * q.alpha) * std::sin(q.beta);
  q.fc = std::sqrt(std::max(0.0, 1.0 - s * s));
  return q;
}

TrionSpin TrionSpin::from_amplitudes(cplx trion_up, cplx trion_down) {
  const cplx perp = std::conj(trion_up) * trion_down;
  return {perp.real(), perp.imag(), 0.5 * (std::norm(trion_up) - std::norm(trion_down))};
}

TrionSpin TrionSpin::from_density(const Eigen::Matrix2cd& rho) {
  const cplx perp = rho(1, 0);
  return {perp.real(), perp.imag(), 0.5 * (rho(0, 0).real() - rho(1, 1).real())};
}

TwoQubitState spin_photon_state(cplx trion_up, cplx trion_down, const PhotonQubit& photon) {
  const double n = std::norm(trion_up) + std::norm(trion_down);
  if (std::abs(n - 1.0) > 1e-10) {
    throw InvalidParams("spin_photon_state requires normalized trion amplitudes");
  }
  TwoQubitState psi;
  psi.head<2>() = trion_up * photon.tilde_state(+1);
  psi.tail<2>() = trion_down * photon.tilde_state(-1);
  return psi;
}

double concurrence_analytic(const TrionSpin& spin, const PhotonQubit& photon) {
  return 2.0 * spin.in_plane() * photon.fc;
}

double wootters_concurrence(const TwoQubitDensity& rho_in) {
  if ((rho_in - rho_in.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidParams("wootters_concurrence: matrix is not Hermitian");
  }
  const double tr = rho_in.trace().real();
  if (!(tr > 0.0)) throw InvalidParams("wootters_concurrence: non-positive trace");
  const TwoQubitDensity rho = 0.5 * (rho_in + rho_in.adjoint()) / tr;
  Eigen::SelfAdjointEigenSolver<TwoQubitDensity> eig(rho);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidParams("wootters_concurrence: matrix is not positive semidefinite");
  }
  const Eigen::Vector4d root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const TwoQubitDensity sqrt_rho = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
  TwoQubitDensity flip = TwoQubitDensity::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const TwoQubitDensity m = sqrt_rho * flip * sqrt_rho.conjugate();
  const Eigen::Vector4d sv = Eigen::JacobiSVD<TwoQubitDensity>(m).singularValues();
  return std::max(0.0, sv(0) - sv(1) - sv(2) - sv(3));
}

double pure_state_concurrence(const TwoQubitState& psi) {
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

TwoQubitDensity steady_eph_density(const SystemParams& params, const Eigen::Matrix2cd& trion_rho) {
  require_fast_cavity(params, "steady_eph_density");
  const double trace = trion_rho.trace().real();
  if (!(trace > 1e-12)) throw InvalidParams("steady_eph_density: trion density matrix has zero trace");
  const double d = params.detuning();
  const double k = params.kappa;
  const double dl = params.delta;
  const double pref = (d * d + k * k) / (d * d + dl * dl + k * k);
  const cplx gg = dl / cplx(d, -k);
  const cplx gc = std::conj(gg);
  const double g2 = std::norm(gg);
  const cplx uu = trion_rho(0, 0);
  const cplx ud = trion_rho(0, 1);
  const cplx du = trion_rho(1, 0);
  const cplx dd = trion_rho(1, 1);
  TwoQubitDensity rho;
  rho << uu, gg * uu, gg * ud, ud,
         gc * uu, g2 * uu, g2 * ud, gc * ud,
         gc * du, g2 * du, g2 * dd, gc * dd,
         du, gg * du, gg * dd, dd;
  return pref * rho / trace;
}

}  // namespace spinphoton

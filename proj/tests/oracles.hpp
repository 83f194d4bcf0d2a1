#ifndef SPINPHOTON_TESTS_ORACLES_HPP
#define SPINPHOTON_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

struct Transmission {
  cplx pp, pm, mp, mm;  // pm: sigma+ in, sigma- out
};

// Steady state of the linearized input-output equations for fields
// proportional to exp(-i w t), unknowns (c_+, c_-, p) with p the spin-up
// polarization a_{+1/2}^dag a_{+3/2}; outputs sqrt(kappa) c, inputs 1/sqrt(kappa).
inline Transmission transmission(double omega_c, double delta, double omega_0, double g, double kappa,
                                 double w) {
  Eigen::Matrix3cd a;
  const cplx cav = I * (w - omega_c) - kappa;
  a << cav, -I * delta, -I * g,
      -I * delta, cav, 0.0,
      -I * g, 0.0, I * (w - omega_0);
  const auto lu = a.fullPivLu();
  const Eigen::Vector3cd from_plus = lu.solve(Eigen::Vector3cd(-1.0, 0.0, 0.0));
  const Eigen::Vector3cd from_minus = lu.solve(Eigen::Vector3cd(0.0, -1.0, 0.0));
  return {kappa * from_plus(0), kappa * from_plus(1), kappa * from_minus(0), kappa * from_minus(1)};
}

// exp(alpha a^dag - alpha^* a) |0> on a large Fock space, first n entries.
inline Eigen::VectorXcd displaced_vacuum(cplx alpha, int n, int big = 80) {
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(big, big);
  for (int k = 1; k < big; ++k) {
    gen(k, k - 1) = alpha * std::sqrt(double(k));
    gen(k - 1, k) = -std::conj(alpha) * std::sqrt(double(k));
  }
  const Eigen::MatrixXcd d = gen.exp();
  return d.col(0).head(n);
}

// Single photon, empty dot, sigma+ initially: amplitudes on (+, -) are
// exp(-kappa t) (cos(delta t), -i sin(delta t)) in the frame of omega_c.
inline std::array<cplx, 2> single_photon(double delta, double kappa, double t) {
  const double decay = std::exp(-kappa * t);
  return {decay * std::cos(delta * t), -I * decay * std::sin(delta * t)};
}

// Spin-up branch of the single-excitation problem in the frame of omega_0:
// y = (trion, electron + sigma+ photon, electron + sigma- photon).
inline std::array<cplx, 3> emission_rk4(double detuning, double delta, double g, double kappa, double t_end,
                                        double dt = 1e-3) {
  using V = Eigen::Vector3cd;
  const cplx w = -detuning - I * kappa;
  const auto f = [&](const V& y) {
    return V(-I * g * y(1), -I * (w * y(1) + delta * y(2) + g * y(0)), -I * (w * y(2) + delta * y(1)));
  };
  V y(1.0, 0.0, 0.0);
  const int steps = static_cast<int>(std::ceil(t_end / dt));
  const double h = t_end / steps;
  for (int i = 0; i < steps; ++i) {
    const V k1 = f(y);
    const V k2 = f(y + 0.5 * h * k1);
    const V k3 = f(y + 0.5 * h * k2);
    const V k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {y(0), y(1), y(2)};
}

// Spin-up excitation branch driven by a classical circular field, fixed-step RK4
// in the lab frame: i dt = omega_0 t + g c(t) e, i de = g c(t)^* t.
template <class Field>
std::array<cplx, 2> excitation_rk4(Field field, double omega_0, double g, cplx e0, double t_end,
                                   double dt = 2e-4) {
  using V = Eigen::Vector2cd;
  const auto f = [&](double t, const V& y) {
    const cplx c = field(t);
    return V(-I * g * std::conj(c) * y(1), -I * (omega_0 * y(1) + g * c * y(0)));
  };
  V y(e0, 0.0);
  const int steps = static_cast<int>(std::ceil(t_end / dt));
  const double h = t_end / steps;
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    const V k1 = f(t, y);
    const V k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const V k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const V k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return {y(0), y(1)};
}

inline double pure_concurrence(const Eigen::Vector4cd& v) { return 2.0 * std::abs(v(0) * v(3) - v(1) * v(2)); }

// Wootters concurrence via the R-matrix eigenvalues, sqrt(eig(rho rho~)).
inline double mixed_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde);
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) l[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Three-tangle from the monogamy identity 4 det(rho_A) - C_AB^2 - C_AC^2,
// qubit A is the most significant.
inline double three_tangle_ckw(const Eigen::VectorXcd& psi_in) {
  const Eigen::VectorXcd psi = psi_in.normalized();
  const auto amp = [&](int a, int b, int c) { return psi(4 * a + 2 * b + c); };
  Eigen::Matrix2cd ra = Eigen::Matrix2cd::Zero();
  Eigen::Matrix4cd rab = Eigen::Matrix4cd::Zero();
  Eigen::Matrix4cd rac = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2)
            for (int c2 = 0; c2 < 2; ++c2) {
              const cplx term = amp(a, b, c) * std::conj(amp(a2, b2, c2));
              if (b == b2 && c == c2) ra(a, a2) += term;
              if (c == c2) rab(2 * a + b, 2 * a2 + b2) += term;
              if (b == b2) rac(2 * a + c, 2 * a2 + c2) += term;
            }
  const double cab = mixed_concurrence(rab);
  const double cac = mixed_concurrence(rac);
  return 4.0 * ra.determinant().real() - cab * cab - cac * cac;
}

// Concurrence of assistance of the reduced state of qubits B and C: the
// largest average concurrence reachable by measuring qubit A.
inline double concurrence_of_assistance(const Eigen::VectorXcd& psi_in) {
  const Eigen::VectorXcd psi = psi_in.normalized();
  const Eigen::Matrix4cd rho = psi.head<4>() * psi.head<4>().adjoint() + psi.tail<4>() * psi.tail<4>().adjoint();
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
  double total = 0.0;
  for (int i = 0; i < 4; ++i) total += std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  return total;
}

struct BasisSearch {
  double best = 0.0;
  Eigen::Vector2cd u;
  Eigen::Vector2cd v;
};

// Exhaustive search over orthonormal pairs u = (cos a, e^{ib} sin a),
// v = (-e^{-ib} sin a, cos a) for the largest min(|<u|p>|^2, |<v|m>|^2).
inline BasisSearch closest_pair_search(const Eigen::Vector2cd& p, const Eigen::Vector2cd& m, int n = 360) {
  BasisSearch out;
  for (int i = 0; i < n; ++i) {
    const double a = std::numbers::pi * i / n;
    for (int j = 0; j < n; ++j) {
      const double b = 2.0 * std::numbers::pi * j / n;
      const Eigen::Vector2cd u(std::cos(a), std::polar(1.0, b) * std::sin(a));
      const Eigen::Vector2cd v(-std::polar(1.0, -b) * std::sin(a), std::cos(a));
      const double score = std::min(std::norm(u.dot(p)), std::norm(v.dot(m)));
      if (score > out.best) out = {score, u, v};
    }
  }
  return out;
}

}  // namespace oracle

#endif  // SPINPHOTON_TESTS_ORACLES_HPP

#include "spinphoton/multiphoton.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spinphoton/errors.hpp"
#include "spinphoton/optimize.hpp"
#include "spinphoton/parallel.hpp"

namespace spinphoton {

Eigen::Matrix2cd spin_rotation() {
  Eigen::Matrix2cd r;
  r << 1.0, -1.0, 1.0, 1.0;
  return r / std::sqrt(2.0);
}

MultiphotonState build_cluster_state(int n, const Eigen::Vector2cd& photon_up,
                                     const Eigen::Vector2cd& photon_down,
                                     const Eigen::Vector2cd& electron) {
  if (n < 1 || n > kMaxClusterPhotons) {
    throw InvalidParams("cluster states support 1 to " + std::to_string(kMaxClusterPhotons) +
                        " photons, got " + std::to_string(n));
  }
  if (std::abs(electron.squaredNorm() - 1.0) > 1e-10) {
    throw InvalidParams("initial electron state must be normalized");
  }
  const Eigen::Matrix2cd rot = spin_rotation();
  // Index = electron bit * 2^m + photon register (newest photon most significant).
  Eigen::VectorXcd state = electron;
  for (int m = 0; m < n; ++m) {
    if (m > 0) {
      const Eigen::Index half = state.size() / 2;
      Eigen::VectorXcd rotated(state.size());
      rotated.head(half) = rot(0, 0) * state.head(half) + rot(0, 1) * state.tail(half);
      rotated.tail(half) = rot(1, 0) * state.head(half) + rot(1, 1) * state.tail(half);
      state = rotated;
    }
    const Eigen::Index block = state.size() / 2;
    Eigen::VectorXcd next(state.size() * 2);
    for (int e = 0; e < 2; ++e) {
      const Eigen::Vector2cd& photon = e == 0 ? photon_up : photon_down;
      for (int p = 0; p < 2; ++p) {
        next.segment((2 * e + p) * block, block) = photon(p) * state.segment(e * block, block);
      }
    }
    state = next;
  }
  return {n, state};
}

MultiphotonState build_cluster_state(int n, const PhotonQubit& photon, const Eigen::Vector2cd& electron) {
  return build_cluster_state(n, photon.tilde_state(+1), photon.tilde_state(-1), electron);
}

double three_tangle(const Eigen::VectorXcd& amplitudes) {
  if (amplitudes.size() != 8) throw InvalidParams("three_tangle requires a three-qubit state");
  const double norm2 = amplitudes.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidParams("three_tangle: zero state");
  const Eigen::VectorXcd a = amplitudes / std::sqrt(norm2);
  const cplx d1 = a(0) * a(0) * a(7) * a(7) + a(1) * a(1) * a(6) * a(6) + a(2) * a(2) * a(5) * a(5) +
                  a(4) * a(4) * a(3) * a(3);
  const cplx d2 = a(0) * a(7) * a(3) * a(4) + a(0) * a(7) * a(5) * a(2) + a(0) * a(7) * a(6) * a(1) +
                  a(3) * a(4) * a(5) * a(2) + a(3) * a(4) * a(6) * a(1) + a(5) * a(2) * a(6) * a(1);
  const cplx d3 = a(0) * a(6) * a(5) * a(3) + a(7) * a(1) * a(2) * a(4);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

double three_tangle(const MultiphotonState& state) {
  if (state.n_photons != 2) throw InvalidParams("three_tangle requires an electron and two photons");
  return three_tangle(state.amplitudes);
}

StokesVector stokes_vector(const Eigen::Vector2cd& state) {
  const cplx c = std::conj(state(0)) * state(1);
  return {2.0 * c.imag(), std::norm(state(0)) - std::norm(state(1)), 2.0 * c.real()};
}

StokesVector stokes_parameters(const PhotonQubit& photon, int sign) {
  const double s = sign > 0 ? 1.0 : -1.0;
  const double s2a = std::sin(2.0 * photon.alpha);
  return {-s * std::cos(photon.beta) * s2a, s * std::cos(2.0 * photon.alpha), std::sin(photon.beta) * s2a};
}

double poincare_rotation_angle(const PhotonQubit& photon) {
  return std::atan2(std::cos(photon.beta) * std::sin(2.0 * photon.alpha), std::cos(2.0 * photon.alpha));
}

OrthogonalPair closest_orthogonal_basis(const PhotonQubit& photon) {
  const cplx c = std::cos(0.5 * photon.theta);
  const cplx s = -kI * std::sin(0.5 * photon.theta);
  OrthogonalPair pair;
  pair.plus << c, s;
  pair.minus << s, c;
  return pair;
}

double cluster_fidelity_closed_form(int n, const PhotonQubit& photon) {
  if (n < 1) throw InvalidParams("cluster fidelity requires n >= 1");
  return std::pow(0.5 * (1.0 + photon.fc), n);
}

ClusterFidelity cluster_fidelity(int n, const PhotonQubit& photon) {
  const Eigen::Vector2cd electron = Eigen::Vector2cd::Constant(cplx(1.0 / std::sqrt(2.0)));
  const auto actual = build_cluster_state(n, photon, electron);
  const auto basis = closest_orthogonal_basis(photon);
  const auto ideal = build_cluster_state(n, basis.plus, basis.minus, electron);
  return {cluster_fidelity_closed_form(n, photon), std::norm(ideal.amplitudes.dot(actual.amplitudes))};
}

namespace {

// Sum over both outcomes of 2 |det M_k|, M_k the unnormalized two-photon
// amplitude matrix after projecting the electron on the k-th axis state.
double average_concurrence(const Eigen::VectorXcd& psi, double polar, double azimuth) {
  const cplx c = std::cos(0.5 * polar);
  const cplx s = std::polar(std::sin(0.5 * polar), azimuth);
  const cplx axis[2][2] = {{c, s}, {-std::conj(s), c}};
  double total = 0.0;
  for (const auto& m : axis) {
    Eigen::Vector4cd block = std::conj(m[0]) * psi.head<4>() + std::conj(m[1]) * psi.tail<4>();
    total += 2.0 * std::abs(block(0) * block(3) - block(1) * block(2));
  }
  return total;
}

}  // namespace

LocalizableResult localizable_entanglement_two_photons(const MultiphotonState& state,
                                                       const LocalizableConfig& config, int workers) {
  if (state.n_photons != 2 || state.amplitudes.size() != 8) {
    throw InvalidParams("localizable entanglement is implemented for an electron and two photons");
  }
  if (config.polar_points < 2 || config.azimuth_points < 1) {
    throw InvalidParams("localizable entanglement grid needs >= 2 polar and >= 1 azimuth points");
  }
  const Eigen::VectorXcd psi = state.amplitudes.normalized();
  const int np = config.polar_points;
  const int na = config.azimuth_points;
  const double dp = std::numbers::pi / (np - 1);
  const double da = 2.0 * std::numbers::pi / na;
  std::vector<double> values(static_cast<std::size_t>(np) * na);
  parallel_for(values.size(), workers, [&](std::size_t idx) {
    values[idx] = average_concurrence(psi, dp * static_cast<double>(idx / na), da * static_cast<double>(idx % na));
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  LocalizableResult result{values[best], dp * static_cast<double>(best / na), da * static_cast<double>(best % na)};
  if (config.polish_iterations > 0) {
    const auto polished = nelder_mead_minimize(
        [&](std::span<const double> x) { return -average_concurrence(psi, x[0], x[1]); },
        {result.polar, result.azimuth}, {0.5 * dp, 0.5 * da}, config.polish_iterations,
        config.polish_tolerance);
    if (-polished.value > result.value) result = {-polished.value, polished.x[0], polished.x[1]};
  }
  return result;
}

}  // namespace spinphoton

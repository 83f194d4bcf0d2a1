#ifndef SPINPHOTON_MULTIPHOTON_HPP
#define SPINPHOTON_MULTIPHOTON_HPP

#include <Eigen/Dense>

#include "spinphoton/emission.hpp"

namespace spinphoton {

inline constexpr int kMaxClusterPhotons = 8;

/// Electron (x) n photon polarization qubits. Qubit order, most significant
/// first: electron, newest photon, ..., oldest photon. Bit 0 is up / sigma+,
/// bit 1 is down / sigma-.
struct MultiphotonState {
  int n_photons = 0;
  Eigen::VectorXcd amplitudes;
};

/// Electron spin rotation applied between emissions, [[1, -1], [1, 1]] / sqrt(2)
/// in the {up, down} basis.
Eigen::Matrix2cd spin_rotation();

/// Repeated emission (|up> -> |up>|+~>, |down> -> |down>|-~>) interleaved with
/// spin_rotation(), starting from `electron` (normalized). n in [1, 8].
MultiphotonState build_cluster_state(int n, const PhotonQubit& photon,
                                     const Eigen::Vector2cd& electron = Eigen::Vector2cd::Constant(
                                         cplx(1.0 / std::sqrt(2.0))));

/// Same protocol with |+~>, |-~> replaced by an arbitrary photon pair.
MultiphotonState build_cluster_state(int n, const Eigen::Vector2cd& photon_up,
                                     const Eigen::Vector2cd& photon_down,
                                     const Eigen::Vector2cd& electron);

/// Three-tangle 4 |Det| of a pure three-qubit state (Cayley hyperdeterminant).
double three_tangle(const Eigen::VectorXcd& amplitudes);
double three_tangle(const MultiphotonState& state);

struct StokesVector {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;

  double norm() const { return std::sqrt(xi1 * xi1 + xi2 * xi2 + xi3 * xi3); }
};

/// Stokes vector of a polarization state (u, w) in the {|+>, |->} basis:
/// xi1 = 2 Im(u* w), xi2 = |u|^2 - |w|^2, xi3 = 2 Re(u* w).
StokesVector stokes_vector(const Eigen::Vector2cd& state);

/// Stokes vector of |+~> (sign > 0) or |-~>:
/// (-+cos(beta) sin(2 alpha), +-cos(2 alpha), sin(beta) sin(2 alpha)).
StokesVector stokes_parameters(const PhotonQubit& photon, int sign);

/// Rotation angle about axis 3 that brings both Stokes vectors of |+-~> to
/// xi1' = 0, computed as atan2(cos(beta) sin(2 alpha), cos(2 alpha)) so that
/// |alpha| -> pi/4 and |alpha| > pi/4 stay regular. Equals theta.
double poincare_rotation_angle(const PhotonQubit& photon);

struct OrthogonalPair {
  Eigen::Vector2cd plus;
  Eigen::Vector2cd minus;
};

/// |~~+-> = cos(theta/2)|+-> - i sin(theta/2)|-+>.
OrthogonalPair closest_orthogonal_basis(const PhotonQubit& photon);

/// ((1 + F_c)/2)^n.
double cluster_fidelity_closed_form(int n, const PhotonQubit& photon);

struct ClusterFidelity {
  double closed_form = 0.0;
  double explicit_overlap = 0.0;  ///< |<Psi_n|Psi_n^(0)>|^2 from explicit state vectors
};

ClusterFidelity cluster_fidelity(int n, const PhotonQubit& photon);

struct LocalizableConfig {
  int polar_points = 180;
  int azimuth_points = 180;
  int polish_iterations = 200;
  double polish_tolerance = 1e-9;
};

struct LocalizableResult {
  double value = 0.0;
  double polar = 0.0;    ///< measurement axis of the electron on the Bloch sphere
  double azimuth = 0.0;
};

/// Average two-photon concurrence after a projective electron measurement,
/// maximized over the measurement axis. Requires n_photons == 2.
LocalizableResult localizable_entanglement_two_photons(const MultiphotonState& state,
                                                       const LocalizableConfig& config = {},
                                                       int workers = 1);

}  // namespace spinphoton

#endif  // SPINPHOTON_MULTIPHOTON_HPP

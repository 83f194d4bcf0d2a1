#ifndef SPINPHOTON_MODEL_HPP
#define SPINPHOTON_MODEL_HPP

#include <array>
#include <complex>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spinphoton/params.hpp"

namespace spinphoton {

/// Quantum-dot levels. Electron spin S_z = +-1/2 and trion pseudospin
/// J_z = +-1/2 (heavy hole +-3/2).
enum class MatterLevel : int { ElectronUp = 0, ElectronDown = 1, TrionUp = 2, TrionDown = 3 };

inline constexpr int kMatterLevels = 4;

/// Matter level (x) two circular Fock registers n_+, n_- in [0, cutoff].
/// Flat index is matter-major, then n_+, then n_-.
class CompositeBasis {
 public:
  struct Label {
    MatterLevel level;
    int n_plus;
    int n_minus;
  };

  explicit CompositeBasis(int cutoff);

  int cutoff() const { return cutoff_; }
  int fock_dim() const { return cutoff_ + 1; }
  Eigen::Index dimension() const { return Eigen::Index{kMatterLevels} * fock_dim() * fock_dim(); }

  Eigen::Index index(MatterLevel level, int n_plus, int n_minus) const;
  Label label(Eigen::Index index) const;

  bool operator==(const CompositeBasis& other) const { return cutoff_ == other.cutoff_; }

 private:
  int cutoff_;
};

using SparseMatrixXcd = Eigen::SparseMatrix<cplx>;

/// Square operator on a CompositeBasis. Storage is always sparse; dense()
/// materializes it for the small-dimension integrators.
struct Operator {
  SparseMatrixXcd matrix;
  bool hermitian = false;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
  Eigen::Index dimension() const { return matrix.rows(); }
};

/// Dimension up to which integrators work on dense matrices.
inline constexpr Eigen::Index kDenseDimensionLimit = 4 * 16 * 16;

struct PureState {
  CompositeBasis basis;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
  PureState normalized() const;

  static PureState basis_state(const CompositeBasis& basis, MatterLevel level, int n_plus = 0,
                               int n_minus = 0);
  /// (|e_up> + |e_down>)/sqrt(2) with empty cavity: the in-plane S_x = 1/2 electron.
  static PureState electron_in_plane(const CompositeBasis& basis);
  /// Arbitrary matter superposition {e_up, e_down, t_up, t_down} with empty cavity.
  static PureState matter_state(const CompositeBasis& basis, const std::array<cplx, 4>& amplitudes);
};

struct DensityOperator {
  Eigen::MatrixXcd matrix;

  static DensityOperator from_pure(const PureState& state);

  double trace() const { return matrix.trace().real(); }
  double purity() const { return (matrix * matrix).trace().real(); }
  double min_eigenvalue() const;

  /// Hermitian to 1e-12, unit trace to 1e-10, eigenvalues >= -1e-10.
  /// Throws InvalidParams describing the first violation.
  void validate() const;
};

/// Hamiltonian without the pump term (the delta pulse is applied by
/// apply_coherent_kick). In the circular basis the H/V splitting becomes the
/// mode-mixing term delta (c_-^dag c_+ + c_+^dag c_-).
Operator build_hamiltonian(const SystemParams& params);

/// H - i kappa sum_+- c_+-^dag c_+-.
Operator build_nonhermitian(const SystemParams& params);

/// C_+ = sqrt(2 kappa) c_+, C_- = sqrt(2 kappa) c_-.
std::array<Operator, 2> jump_operators(const SystemParams& params);

Operator annihilation_plus(const CompositeBasis& basis);
Operator annihilation_minus(const CompositeBasis& basis);
Operator photon_number_plus(const CompositeBasis& basis);
Operator photon_number_minus(const CompositeBasis& basis);
Operator trion_number(const CompositeBasis& basis);
/// Photons plus trions; conserved by build_hamiltonian.
Operator excitation_number(const CompositeBasis& basis);

/// Truncated single-mode displacement D(alpha) on Fock states 0..cutoff,
/// built from the exact (untruncated) matrix elements.
Eigen::MatrixXcd displacement_matrix(int cutoff, cplx alpha);

/// Phase convention of the pump kick: <c_+-> = i eps_+- right after the pulse,
/// which gives <c_H(0)> = i(eps_+ + eps_-)/sqrt(2), <c_V(0)> = (eps_+ - eps_-)/sqrt(2).
inline cplx kick_amplitude(cplx eps) { return kI * eps; }

/// Identity on matter (x) D_+(i eps_+) (x) D_-(i eps_-).
Operator kick_operator(const CompositeBasis& basis, cplx eps_plus, cplx eps_minus);

/// Applies the delta-pulse displacement. The result is renormalized; if the
/// truncation removes more than `truncation_tolerance` of the squared norm,
/// throws TruncationOverflow.
PureState apply_coherent_kick(const PureState& state, cplx eps_plus, cplx eps_minus,
                              double truncation_tolerance = 1e-6);

/// <c_H>, <c_V> of a (normalized) state via c_H = (c_+ + c_-)/sqrt2, c_V = -i(c_+ - c_-)/sqrt2.
std::pair<cplx, cplx> linear_mode_amplitudes(const PureState& state);

double expectation(const Operator& op, const PureState& state);
cplx expectation_complex(const Operator& op, const PureState& state);
double expectation(const Operator& op, const DensityOperator& rho);

}  // namespace spinphoton

#endif  // SPINPHOTON_MODEL_HPP

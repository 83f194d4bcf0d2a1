#include "spinphoton/model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "spinphoton/errors.hpp"

namespace spinphoton {

CompositeBasis::CompositeBasis(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) {
    throw InvalidParams("photon cutoff must be >= 1, got " + std::to_string(cutoff));
  }
}

Eigen::Index CompositeBasis::index(MatterLevel level, int n_plus, int n_minus) const {
  if (n_plus < 0 || n_plus > cutoff_ || n_minus < 0 || n_minus > cutoff_) {
    throw InvalidParams("photon occupation outside [0, cutoff]");
  }
  const Eigen::Index f = fock_dim();
  return (static_cast<Eigen::Index>(level) * f + n_plus) * f + n_minus;
}

CompositeBasis::Label CompositeBasis::label(Eigen::Index index) const {
  if (index < 0 || index >= dimension()) {
    throw InvalidParams("basis index out of range");
  }
  const Eigen::Index f = fock_dim();
  return {static_cast<MatterLevel>(index / (f * f)), static_cast<int>((index / f) % f),
          static_cast<int>(index % f)};
}

PureState PureState::normalized() const {
  const double n = norm();
  if (n == 0.0) {
    throw InvalidParams("cannot normalize the zero vector");
  }
  return {basis, amplitudes / n};
}

PureState PureState::basis_state(const CompositeBasis& basis, MatterLevel level, int n_plus,
                                 int n_minus) {
  PureState s{basis, Eigen::VectorXcd::Zero(basis.dimension())};
  s.amplitudes(basis.index(level, n_plus, n_minus)) = 1.0;
  return s;
}

PureState PureState::electron_in_plane(const CompositeBasis& basis) {
  const double r = 1.0 / std::sqrt(2.0);
  return matter_state(basis, {r, r, 0.0, 0.0});
}

PureState PureState::matter_state(const CompositeBasis& basis, const std::array<cplx, 4>& amplitudes) {
  PureState s{basis, Eigen::VectorXcd::Zero(basis.dimension())};
  for (int m = 0; m < kMatterLevels; ++m) {
    s.amplitudes(basis.index(static_cast<MatterLevel>(m), 0, 0)) = amplitudes[m];
  }
  return s;
}

DensityOperator DensityOperator::from_pure(const PureState& state) {
  return {state.amplitudes * state.amplitudes.adjoint()};
}

double DensityOperator::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityOperator::validate() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InvalidParams("density operator must be a non-empty square matrix");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidParams("density operator is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > 1e-10) {
    throw InvalidParams("density operator trace differs from 1 by " +
                        std::to_string(std::abs(trace() - 1.0)));
  }
  if (min_eigenvalue() < -1e-10) {
    throw InvalidParams("density operator has a negative eigenvalue");
  }
}

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrixXcd from_triplets(Eigen::Index dim, const std::vector<Triplet>& triplets) {
  SparseMatrixXcd m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

// Appends the matrix elements of c_+ (or c_-) for every matter level.
void annihilation_triplets(const CompositeBasis& basis, bool plus, cplx scale,
                           std::vector<Triplet>& out) {
  const int c = basis.cutoff();
  for (int m = 0; m < kMatterLevels; ++m) {
    const auto level = static_cast<MatterLevel>(m);
    for (int np = 0; np <= c; ++np) {
      for (int nm = 0; nm <= c; ++nm) {
        const int n = plus ? np : nm;
        if (n == 0) continue;
        const auto col = basis.index(level, np, nm);
        const auto row = plus ? basis.index(level, np - 1, nm) : basis.index(level, np, nm - 1);
        out.emplace_back(row, col, scale * std::sqrt(static_cast<double>(n)));
      }
    }
  }
}

std::vector<Triplet> hamiltonian_triplets(const SystemParams& params, const CompositeBasis& basis) {
  std::vector<Triplet> t;
  const int c = basis.cutoff();
  for (int m = 0; m < kMatterLevels; ++m) {
    const auto level = static_cast<MatterLevel>(m);
    const bool trion = level == MatterLevel::TrionUp || level == MatterLevel::TrionDown;
    for (int np = 0; np <= c; ++np) {
      for (int nm = 0; nm <= c; ++nm) {
        const auto i = basis.index(level, np, nm);
        const double diag = params.omega_c * (np + nm) + (trion ? params.omega_0 : 0.0);
        if (diag != 0.0) t.emplace_back(i, i, diag);
        // delta c_-^dag c_+ : moves one photon from + to -
        if (np > 0 && nm < c) {
          const auto j = basis.index(level, np - 1, nm + 1);
          const double amp = params.delta * std::sqrt(static_cast<double>(np) * (nm + 1));
          t.emplace_back(j, i, amp);
          t.emplace_back(i, j, amp);
        }
      }
    }
  }
  // g a^dag_{+3/2} c_+ a_{+1/2} + h.c. and the sigma- counterpart.
  for (int np = 0; np <= c; ++np) {
    for (int nm = 0; nm <= c; ++nm) {
      if (np > 0) {
        const auto from = basis.index(MatterLevel::ElectronUp, np, nm);
        const auto to = basis.index(MatterLevel::TrionUp, np - 1, nm);
        const double amp = params.g * std::sqrt(static_cast<double>(np));
        t.emplace_back(to, from, amp);
        t.emplace_back(from, to, amp);
      }
      if (nm > 0) {
        const auto from = basis.index(MatterLevel::ElectronDown, np, nm);
        const auto to = basis.index(MatterLevel::TrionDown, np, nm - 1);
        const double amp = params.g * std::sqrt(static_cast<double>(nm));
        t.emplace_back(to, from, amp);
        t.emplace_back(from, to, amp);
      }
    }
  }
  return t;
}

Operator photon_number(const CompositeBasis& basis, bool plus) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
    const auto l = basis.label(i);
    const int n = plus ? l.n_plus : l.n_minus;
    if (n != 0) t.emplace_back(i, i, static_cast<double>(n));
  }
  return {from_triplets(basis.dimension(), t), true};
}

}  // namespace

Operator build_hamiltonian(const SystemParams& params) {
  params.validate();
  const CompositeBasis basis(params.photon_cutoff);
  return {from_triplets(basis.dimension(), hamiltonian_triplets(params, basis)), true};
}

Operator build_nonhermitian(const SystemParams& params) {
  params.validate();
  const CompositeBasis basis(params.photon_cutoff);
  auto t = hamiltonian_triplets(params, basis);
  for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
    const auto l = basis.label(i);
    if (l.n_plus + l.n_minus > 0) {
      t.emplace_back(i, i, cplx(0.0, -params.kappa * (l.n_plus + l.n_minus)));
    }
  }
  return {from_triplets(basis.dimension(), t), false};
}

std::array<Operator, 2> jump_operators(const SystemParams& params) {
  params.validate();
  const CompositeBasis basis(params.photon_cutoff);
  const double s = std::sqrt(2.0 * params.kappa);
  std::vector<Triplet> tp, tm;
  annihilation_triplets(basis, true, s, tp);
  annihilation_triplets(basis, false, s, tm);
  return {Operator{from_triplets(basis.dimension(), tp), false},
          Operator{from_triplets(basis.dimension(), tm), false}};
}

Operator annihilation_plus(const CompositeBasis& basis) {
  std::vector<Triplet> t;
  annihilation_triplets(basis, true, 1.0, t);
  return {from_triplets(basis.dimension(), t), false};
}

Operator annihilation_minus(const CompositeBasis& basis) {
  std::vector<Triplet> t;
  annihilation_triplets(basis, false, 1.0, t);
  return {from_triplets(basis.dimension(), t), false};
}

Operator photon_number_plus(const CompositeBasis& basis) { return photon_number(basis, true); }
Operator photon_number_minus(const CompositeBasis& basis) { return photon_number(basis, false); }

Operator trion_number(const CompositeBasis& basis) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
    const auto l = basis.label(i);
    if (l.level == MatterLevel::TrionUp || l.level == MatterLevel::TrionDown) {
      t.emplace_back(i, i, 1.0);
    }
  }
  return {from_triplets(basis.dimension(), t), true};
}

Operator excitation_number(const CompositeBasis& basis) {
  Operator n = photon_number_plus(basis);
  n.matrix += photon_number_minus(basis).matrix;
  n.matrix += trion_number(basis).matrix;
  return n;
}

Eigen::MatrixXcd displacement_matrix(int cutoff, cplx alpha) {
  const int f = cutoff + 1;
  const double x = std::norm(alpha);
  const double pref = std::exp(-0.5 * x);
  Eigen::MatrixXcd d(f, f);
  for (int m = 0; m < f; ++m) {
    for (int n = 0; n < f; ++n) {
      // <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^{-|a|^2/2} L_n^{(m-n)}(|a|^2) for m >= n
      // and sqrt(m!/n!) (-alpha*)^(n-m) e^{-|a|^2/2} L_m^{(n-m)}(|a|^2) otherwise.
      const int lo = std::min(m, n);
      const int k = std::abs(m - n);
      const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)));
      const cplx base = m >= n ? alpha : -std::conj(alpha);
      const cplx power = k == 0 ? cplx(1.0) : std::pow(base, k);
      d(m, n) = pref * ratio * power * std::assoc_laguerre(static_cast<unsigned>(lo),
                                                             static_cast<unsigned>(k), x);
    }
  }
  return d;
}

Operator kick_operator(const CompositeBasis& basis, cplx eps_plus, cplx eps_minus) {
  const Eigen::MatrixXcd dp = displacement_matrix(basis.cutoff(), kick_amplitude(eps_plus));
  const Eigen::MatrixXcd dm = displacement_matrix(basis.cutoff(), kick_amplitude(eps_minus));
  std::vector<Triplet> t;
  const int f = basis.fock_dim();
  for (int m = 0; m < kMatterLevels; ++m) {
    const auto level = static_cast<MatterLevel>(m);
    for (int p1 = 0; p1 < f; ++p1) {
      for (int q1 = 0; q1 < f; ++q1) {
        for (int p0 = 0; p0 < f; ++p0) {
          for (int q0 = 0; q0 < f; ++q0) {
            const cplx v = dp(p1, p0) * dm(q1, q0);
            if (v != cplx(0.0)) {
              t.emplace_back(basis.index(level, p1, q1), basis.index(level, p0, q0), v);
            }
          }
        }
      }
    }
  }
  return {from_triplets(basis.dimension(), t), false};
}

PureState apply_coherent_kick(const PureState& state, cplx eps_plus, cplx eps_minus,
                              double truncation_tolerance) {
  if (eps_plus == cplx(0.0) && eps_minus == cplx(0.0)) return state;
  const double n0 = state.amplitudes.squaredNorm();
  if (std::abs(n0 - 1.0) > 1e-10) {
    throw InvalidParams("apply_coherent_kick expects a normalized state");
  }
  const Operator k = kick_operator(state.basis, eps_plus, eps_minus);
  PureState out{state.basis, k.matrix * state.amplitudes};
  const double deficit = 1.0 - out.amplitudes.squaredNorm();
  if (deficit > truncation_tolerance) {
    throw TruncationOverflow("coherent kick loses " + std::to_string(deficit) +
                             " of the norm at photon cutoff " +
                             std::to_string(state.basis.cutoff()) +
                             "; increase the cutoff or reduce the pump amplitude");
  }
  return out.normalized();
}

cplx expectation_complex(const Operator& op, const PureState& state) {
  return state.amplitudes.dot(op.matrix * state.amplitudes) / state.amplitudes.squaredNorm();
}

double expectation(const Operator& op, const PureState& state) {
  return expectation_complex(op, state).real();
}

double expectation(const Operator& op, const DensityOperator& rho) {
  // tr(A rho) with A sparse
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < op.matrix.outerSize(); ++k) {
    for (SparseMatrixXcd::InnerIterator it(op.matrix, k); it; ++it) {
      acc += it.value() * rho.matrix(it.col(), it.row());
    }
  }
  return acc.real();
}

std::pair<cplx, cplx> linear_mode_amplitudes(const PureState& state) {
  const cplx cp = expectation_complex(annihilation_plus(state.basis), state);
  const cplx cm = expectation_complex(annihilation_minus(state.basis), state);
  const double r = 1.0 / std::sqrt(2.0);
  return {r * (cp + cm), -kI * r * (cp - cm)};
}

}  // namespace spinphoton

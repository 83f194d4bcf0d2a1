#ifndef SPINPHOTON_MATRIX_IO_HPP
#define SPINPHOTON_MATRIX_IO_HPP

#include <iosfwd>

#include <Eigen/Dense>

#include "spinphoton/model.hpp"

namespace spinphoton {

// Plain-text matrix format used for golden files:
//
//   # spinphoton-matrix v1
//   <rows> <cols> <nonzeros>
//   <row> <col> <real> <imag>      (one line per non-zero entry, row-major)
//
// Numbers are written with 17 significant digits so a write/read cycle is
// exact. Lines starting with '#' after the header are ignored. State vectors
// are written as <dim> x 1 matrices.

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix(std::istream& in);

inline void write_operator(std::ostream& out, const Operator& op) { write_matrix(out, op.dense()); }
inline void write_state(std::ostream& out, const PureState& s) { write_matrix(out, s.amplitudes); }

}  // namespace spinphoton

#endif  // SPINPHOTON_MATRIX_IO_HPP

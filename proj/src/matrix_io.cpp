#include "spinphoton/matrix_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spinphoton/errors.hpp"

namespace spinphoton {

namespace {

constexpr const char* kMagic = "# spinphoton-matrix v1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return true;
  }
  return false;
}

}  // namespace

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m) {
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != cplx(0.0)) ++nnz;
  out << kMagic << '\n' << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == cplx(0.0)) continue;
      out << i << ' ' << j << ' ' << fmt17(m(i, j).real()) << ' ' << fmt17(m(i, j).imag()) << '\n';
    }
  }
}

Eigen::MatrixXcd read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw InvalidParams("not a spinphoton matrix file (missing header)");
  }
  if (!next_data_line(in, line)) throw InvalidParams("matrix file truncated before dimensions");
  std::istringstream dims(line);
  Eigen::Index rows = 0, cols = 0, nnz = 0;
  if (!(dims >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
    throw InvalidParams("malformed matrix dimensions line");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  for (Eigen::Index k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line)) throw InvalidParams("matrix file truncated");
    std::istringstream entry(line);
    Eigen::Index i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(entry >> i >> j >> re >> im) || i < 0 || i >= rows || j < 0 || j >= cols) {
      throw InvalidParams("malformed matrix entry: " + line);
    }
    m(i, j) = cplx(re, im);
  }
  return m;
}

}  // namespace spinphoton

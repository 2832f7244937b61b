#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace sdca {

/// Eigen-pairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // column i pairs with values(i)

  Eigen::MatrixXcd reconstruct() const {
    return vectors * values.cast<std::complex<double>>().asDiagonal() * vectors.adjoint();
  }
};

inline Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

inline Eigen::MatrixXcd symmetric_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.transpose()); }

/// Only the lower triangle of `m` is read.
inline HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigen-decomposition needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigen-decomposition did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace sdca

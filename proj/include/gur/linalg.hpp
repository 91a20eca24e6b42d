#pragma once

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gur {

using Cplx = std::complex<double>;
using Mat  = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using Vec8 = Eigen::Matrix<double, 8, 1>;

// Algebraic identities on exactly representable entries get the tight
// tolerance; unitarity and positivity checks the looser one.
inline constexpr double kAlgebraTol    = 1e-12;
inline constexpr double kPositivityTol = 1e-10;

struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Mat identity(int dim) { return Mat::Identity(dim, dim); }

inline double hermiticity_error(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Mat& m, double tol = kAlgebraTol) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

inline void require_hermitian(const Mat& m, const char* what) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  if (hermiticity_error(m) > kAlgebraTol)
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

/// Kronecker product; dim(out) = dim(a) * dim(b).
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline bool is_unitary(const Mat& u, double tol = kPositivityTol) {
  if (u.rows() != u.cols()) return false;
  return (u * u.adjoint() - identity(int(u.rows()))).cwiseAbs().maxCoeff() <= tol;
}

/// u * op * u^dagger. Rejects non-unitary u.
inline Mat unitary_conjugate(const Mat& op, const Mat& u) {
  if (u.rows() != op.rows() || u.cols() != op.cols())
    throw std::invalid_argument("unitary_conjugate: dimension mismatch");
  if (!is_unitary(u))
    throw std::invalid_argument("unitary_conjugate: u is not unitary within 1e-10");
  return u * op * u.adjoint();
}

inline Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian eigensolver failed");
  return solver.eigenvalues();
}

inline double min_eigenvalue(const Mat& m) {
  return hermitian_eigenvalues(m).minCoeff();
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace gur

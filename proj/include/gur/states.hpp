#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "gur/algebra.hpp"
#include "gur/linalg.hpp"
#include "gur/random.hpp"

namespace gur {

// Validated density operator: Hermitian, unit trace within 1e-10, smallest
// eigenvalue >= -1e-10; dimensions restricted to the systems handled here.
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat rho) : rho_(std::move(rho)), dim_(int(rho_.rows())) {
    if (rho_.rows() != rho_.cols())
      throw std::invalid_argument("density matrix must be square");
    if (dim_ != 2 && dim_ != 3 && dim_ != 4 && dim_ != 9)
      throw std::invalid_argument("density matrix dimension must be one of {2,3,4,9}");
    if (hermiticity_error(rho_) > kPositivityTol)
      throw std::invalid_argument("density matrix is not Hermitian");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > kPositivityTol)
      throw PositivityError("density matrix trace is " + fmt(tr) + ", expected 1");
    const double lo = min_eigenvalue(rho_);
    if (lo < -kPositivityTol)
      throw PositivityError("density matrix has negative eigenvalue " + fmt(lo));
  }

  const Mat& matrix() const { return rho_; }
  int dim() const { return dim_; }

 private:
  Mat rho_;
  int dim_;
};

/// rho = (I + n.sigma)/2. Requires |n| <= 1 (up to tolerance).
inline DensityMatrix qubit_density(const Vec3& n) {
  Mat rho = identity(2) / 2.0;
  for (int i = 0; i < 3; ++i) rho += 0.5 * n(i) * pauli(i + 1);
  return DensityMatrix(rho);
}

/// rho = (I + sqrt(3) n.lambda)/3. Positivity is checked on construction.
inline DensityMatrix qutrit_density(const Vec8& n) {
  const double s3 = std::sqrt(3.0);
  Mat rho = identity(3) / 3.0;
  for (int i = 0; i < 8; ++i) rho += (s3 / 3.0) * n(i) * gellmann(i + 1);
  return DensityMatrix(rho);
}

/// Inverse of the Bloch parametrizations. Returns a 3-vector for qubits and
/// an 8-vector for qutrits.
inline Eigen::VectorXd bloch_of(const DensityMatrix& rho) {
  if (rho.dim() == 2) {
    Eigen::VectorXd n(3);
    for (int i = 0; i < 3; ++i) n(i) = (rho.matrix() * pauli(i + 1)).trace().real();
    return n;
  }
  if (rho.dim() == 3) {
    const double s3 = std::sqrt(3.0);
    Eigen::VectorXd n(8);
    for (int i = 0; i < 8; ++i)
      n(i) = (s3 / 2.0) * (rho.matrix() * gellmann(i + 1)).trace().real();
    return n;
  }
  throw std::invalid_argument("bloch_of: supported only for dim 2 and 3");
}

inline double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

inline bool is_pure(const DensityMatrix& rho, double tol = kPositivityTol) {
  return 1.0 - purity(rho) < tol;
}

/// Linear entropy (d/(d-1))(1 - tr rho^2) with d the full system dimension.
inline double linear_entropy(const DensityMatrix& rho) {
  const double d = rho.dim();
  return (d / (d - 1.0)) * (1.0 - purity(rho));
}

enum class Omega3Region { Interior, Boundary, Extremal, Outside };

inline const char* to_string(Omega3Region r) {
  switch (r) {
    case Omega3Region::Interior: return "Interior";
    case Omega3Region::Boundary: return "Boundary";
    case Omega3Region::Extremal: return "Extremal";
    case Omega3Region::Outside: return "Outside";
  }
  return "?";
}

/// Locates n in the qutrit state space Omega_3:
///   extremals: n.n = 1 and n*n = n,
///   boundary:  3 n.n - 2 (n*n).n = 1 with n.n <= 1,
///   interior:  both strict inequalities.
/// The most specific label wins (every extremal is also on the boundary).
inline Omega3Region omega3_membership(const Vec8& n, double tol = 1e-9) {
  const double nn = n.squaredNorm();
  const Vec8 ss = star(n, n);
  const double b = 3.0 * nn - 2.0 * ss.dot(n);
  if (nn > 1.0 + tol || b > 1.0 + tol) return Omega3Region::Outside;
  if (std::abs(nn - 1.0) <= tol && (ss - n).cwiseAbs().maxCoeff() <= tol)
    return Omega3Region::Extremal;
  if (std::abs(b - 1.0) <= tol) return Omega3Region::Boundary;
  return Omega3Region::Interior;
}

namespace detail {

inline void check_unit_sum_sq(std::span<const double> k, const char* what) {
  double s = 0.0;
  for (double v : k) s += v * v;
  if (std::abs(s - 1.0) > kPositivityTol)
    throw std::invalid_argument(std::string(what) + ": coefficients have sum of squares " +
                                fmt(s) + ", expected 1");
}

inline CVec schmidt_vector(std::span<const double> k) {
  const int local = int(k.size());
  CVec psi = CVec::Zero(local * local);
  for (int i = 0; i < local; ++i) psi(i * local + i) = k[i];
  return psi;
}

}  // namespace detail

/// Projector onto sum_i k_i |ii>. Two coefficients give a two-qubit state,
/// three a two-qutrit state.
inline DensityMatrix schmidt_pure(std::span<const double> k) {
  if (k.size() != 2 && k.size() != 3)
    throw std::invalid_argument("schmidt_pure: need 2 or 3 coefficients");
  detail::check_unit_sum_sq(k, "schmidt_pure");
  const CVec psi = detail::schmidt_vector(k);
  return DensityMatrix(psi * psi.adjoint());
}

inline DensityMatrix schmidt_pure(std::initializer_list<double> k) {
  return schmidt_pure(std::span<const double>(k.begin(), k.size()));
}

/// p |psi1><psi1| + (1-p) |psi2><psi2| with both states in Schmidt form over
/// the same basis.
inline DensityMatrix mixture(double p, const std::array<double, 3>& k1,
                             const std::array<double, 3>& k2) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("mixture: p must be in [0,1]");
  detail::check_unit_sum_sq(k1, "mixture");
  detail::check_unit_sum_sq(k2, "mixture");
  const CVec psi1 = detail::schmidt_vector(k1);
  const CVec psi2 = detail::schmidt_vector(k2);
  return DensityMatrix(p * (psi1 * psi1.adjoint()) + (1.0 - p) * (psi2 * psi2.adjoint()));
}

/// Two-qutrit isotropic state p |phi><phi| + (1-p)/9 I, phi maximally entangled.
inline DensityMatrix isotropic(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("isotropic: p must be in [0,1]");
  const double k = 1.0 / std::sqrt(3.0);
  const CVec phi = detail::schmidt_vector(std::array<double, 3>{k, k, k});
  return DensityMatrix(p * (phi * phi.adjoint()) + (1.0 - p) / 9.0 * identity(9));
}

/// Two-qubit Werner state ((1-p)/4) I + p |s><s| with s the singlet.
/// Positive for p in [-1/3, 1]; violations are rejected by construction.
inline DensityMatrix werner_qubit(double p) {
  CVec s = CVec::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return DensityMatrix((1.0 - p) / 4.0 * identity(4) + p * (s * s.adjoint()));
}

namespace detail {

// Positivity check for a qutrit Bloch vector with a useful error message:
// along the direction u = n/|n| the admissible radius is -1/(sqrt(3) mu_min)
// where mu_min is the smallest eigenvalue of u.lambda.
inline void validate_qutrit_bloch(const Vec8& n) {
  const double s3 = std::sqrt(3.0);
  Mat rho = identity(3) / 3.0;
  for (int i = 0; i < 8; ++i) rho += (s3 / 3.0) * n(i) * gellmann(i + 1);
  const double lo = min_eigenvalue(rho);
  if (lo >= -kPositivityTol) return;

  const double norm = n.norm();
  Mat udotl = Mat::Zero(3, 3);
  for (int i = 0; i < 8; ++i) udotl += (n(i) / norm) * gellmann(i + 1);
  const double mu_min = min_eigenvalue(udotl);
  const double admissible = -1.0 / (s3 * mu_min);
  throw PositivityError("qutrit state violates positivity (eigenvalue " + fmt(lo) +
                        "); along this direction |n| must be <= " + fmt(admissible) +
                        ", got " + fmt(norm));
}

}  // namespace detail

/// Bloch vector with a single nonzero component n_index = value.
inline Vec8 one_param_qutrit(int index, double value) {
  Vec8 n = Vec8::Zero();
  n(index - 1) = value;  // unit8 bounds-checks via gellmann below
  if (index < 1 || index > 8)
    throw std::invalid_argument("one_param_qutrit: index must be in 1..8");
  detail::validate_qutrit_bloch(n);
  return n;
}

/// Bloch vector with two nonzero components.
inline Vec8 two_param_qutrit(std::pair<int, int> indices, std::pair<double, double> values) {
  auto [i, j] = indices;
  if (i < 1 || i > 8 || j < 1 || j > 8 || i == j)
    throw std::invalid_argument("two_param_qutrit: indices must be distinct and in 1..8");
  Vec8 n = Vec8::Zero();
  n(i - 1) = values.first;
  n(j - 1) = values.second;
  detail::validate_qutrit_bloch(n);
  return n;
}

/// Bloch vector with three nonzero components.
inline Vec8 three_param_qutrit(const std::array<int, 3>& indices,
                               const std::array<double, 3>& values) {
  Vec8 n = Vec8::Zero();
  for (int t = 0; t < 3; ++t) {
    const int i = indices[t];
    if (i < 1 || i > 8) throw std::invalid_argument("three_param_qutrit: index out of range");
    for (int u = 0; u < t; ++u)
      if (indices[u] == i) throw std::invalid_argument("three_param_qutrit: repeated index");
    n(i - 1) = values[t];
  }
  detail::validate_qutrit_bloch(n);
  return n;
}

/// Projector onto a seeded complex-Gaussian unit vector.
inline DensityMatrix random_pure(int dim, std::uint64_t seed) {
  Rng rng(seed);
  const CVec v = rng.unit_state_vector(dim);
  return DensityMatrix(v * v.adjoint());
}

/// Convex mixture of dim seeded random pure states with Dirichlet(1,..,1)
/// weights (normalized exponentials). Exercises invariants; makes no claim
/// of sampling a canonical measure.
inline DensityMatrix random_density(int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(dim);
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    double u = 0.0;
    do {
      u = rng.uniform();
    } while (u <= 0.0);
    w[i] = -std::log(u);
    total += w[i];
  }
  Mat rho = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const CVec v = rng.unit_state_vector(dim);
    rho += (w[i] / total) * (v * v.adjoint());
  }
  return DensityMatrix(rho);
}

}  // namespace gur

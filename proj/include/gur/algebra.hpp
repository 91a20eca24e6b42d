#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "gur/linalg.hpp"

namespace gur {

enum class Axis { X, Y, Z };

namespace detail {

inline std::vector<Mat> make_pauli_set() {
  const Cplx i(0.0, 1.0);
  Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  return {sx, sy, sz};
}

// Standard defining-representation Gell-Mann set: lambda3 and lambda8
// diagonal, (lambda6, lambda7) coupling levels 2-3.
inline std::vector<Mat> make_gellmann_set() {
  const Cplx i(0.0, 1.0);
  const double s3 = std::sqrt(3.0);
  std::vector<Mat> g(8, Mat::Zero(3, 3));
  g[0](0, 1) = 1;
  g[0](1, 0) = 1;
  g[1](0, 1) = -i;
  g[1](1, 0) = i;
  g[2](0, 0) = 1;
  g[2](1, 1) = -1;
  g[3](0, 2) = 1;
  g[3](2, 0) = 1;
  g[4](0, 2) = -i;
  g[4](2, 0) = i;
  g[5](1, 2) = 1;
  g[5](2, 1) = 1;
  g[6](1, 2) = -i;
  g[6](2, 1) = i;
  g[7](0, 0) = 1.0 / s3;
  g[7](1, 1) = 1.0 / s3;
  g[7](2, 2) = -2.0 / s3;
  return g;
}

inline std::vector<Mat> make_spin1_set() {
  const Cplx i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  Mat sx = Mat::Zero(3, 3), sy = Mat::Zero(3, 3), sz = Mat::Zero(3, 3);
  sx(0, 1) = r;
  sx(1, 0) = r;
  sx(1, 2) = r;
  sx(2, 1) = r;
  sy(0, 1) = -i * r;
  sy(1, 0) = i * r;
  sy(1, 2) = -i * r;
  sy(2, 1) = i * r;
  sz(0, 0) = 1;
  sz(2, 2) = -1;
  return {sx, sy, sz};
}

}  // namespace detail

/// Pauli matrix along the given axis.
inline const Mat& pauli(Axis axis) {
  static const std::vector<Mat> set = detail::make_pauli_set();
  return set[static_cast<int>(axis)];
}

/// Pauli matrix by index, 1..3 = x, y, z.
inline const Mat& pauli(int i) {
  if (i < 1 || i > 3) throw std::invalid_argument("pauli: index must be in 1..3");
  static const std::vector<Mat> set = detail::make_pauli_set();
  return set[i - 1];
}

/// Gell-Mann matrix lambda_i, i in 1..8.
inline const Mat& gellmann(int i) {
  if (i < 1 || i > 8) throw std::invalid_argument("gellmann: index must be in 1..8");
  static const std::vector<Mat> set = detail::make_gellmann_set();
  return set[i - 1];
}

/// Spin-1 operator along the given axis.
inline const Mat& spin1(Axis axis) {
  static const std::vector<Mat> set = detail::make_spin1_set();
  return set[static_cast<int>(axis)];
}

// SU(3) structure constants, computed once from the trace formulas
//   d_jkl = tr({lambda_j, lambda_k} lambda_l) / 4
//   f_jkl = tr([lambda_j, lambda_k] lambda_l) / (4i)
// rather than transcribed from a table.
class StructureConstants {
 public:
  static const StructureConstants& instance() {
    static const StructureConstants sc;
    return sc;
  }

  /// Totally symmetric tensor, 1-based indices.
  double d(int j, int k, int l) const { return d_[j - 1][k - 1][l - 1]; }
  /// Totally antisymmetric tensor, 1-based indices.
  double f(int j, int k, int l) const { return f_[j - 1][k - 1][l - 1]; }

 private:
  StructureConstants() {
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const Mat anti = anticommutator(gellmann(j + 1), gellmann(k + 1));
        const Mat comm = commutator(gellmann(j + 1), gellmann(k + 1));
        for (int l = 0; l < 8; ++l) {
          const Cplx td = (anti * gellmann(l + 1)).trace();
          const Cplx tf = (comm * gellmann(l + 1)).trace();
          d_[j][k][l] = td.real() / 4.0;
          f_[j][k][l] = tf.imag() / 4.0;
        }
      }
  }

  std::array<std::array<std::array<double, 8>, 8>, 8> d_{};
  std::array<std::array<std::array<double, 8>, 8>, 8> f_{};
};

/// (u * v)_j = sqrt(3) d_jkl u_k v_l  (symmetric star product on R^8).
inline Vec8 star(const Vec8& u, const Vec8& v) {
  const auto& sc = StructureConstants::instance();
  const double s3 = std::sqrt(3.0);
  Vec8 out = Vec8::Zero();
  for (int j = 1; j <= 8; ++j) {
    double acc = 0.0;
    for (int k = 1; k <= 8; ++k)
      for (int l = 1; l <= 8; ++l) acc += sc.d(j, k, l) * u(k - 1) * v(l - 1);
    out(j - 1) = s3 * acc;
  }
  return out;
}

/// (u ^ v)_k = f_ijk u_i v_j  (antisymmetric wedge product on R^8).
inline Vec8 wedge(const Vec8& u, const Vec8& v) {
  const auto& sc = StructureConstants::instance();
  Vec8 out = Vec8::Zero();
  for (int k = 1; k <= 8; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= 8; ++i)
      for (int j = 1; j <= 8; ++j) acc += sc.f(i, j, k) * u(i - 1) * v(j - 1);
    out(k - 1) = acc;
  }
  return out;
}

/// Kronecker product of two operators.
inline Mat tensor(const Mat& a, const Mat& b) { return kron(a, b); }

/// Unit vector e_i of R^8, 1-based.
inline Vec8 unit8(int i) {
  if (i < 1 || i > 8) throw std::invalid_argument("unit8: index must be in 1..8");
  Vec8 v = Vec8::Zero();
  v(i - 1) = 1.0;
  return v;
}

struct GellMannDecomposition {
  double c0 = 0.0;  // coefficient of the identity
  Vec8 c = Vec8::Zero();
  double residual = 0.0;  // max entrywise reconstruction error
};

/// Expand a 3x3 operator over {I, lambda_1..lambda_8}:
/// op = c0 I + sum_i c_i lambda_i with c_i = tr(op lambda_i)/2, c0 = tr(op)/3.
/// An optional basis unitary expands over the conjugated set U lambda_i U^dagger.
inline GellMannDecomposition decompose(const Mat& op, const Mat& basis_u = Mat()) {
  if (op.rows() != 3 || op.cols() != 3)
    throw std::invalid_argument("decompose: operator must be 3x3");
  const bool conjugated = basis_u.size() != 0;
  if (conjugated && !is_unitary(basis_u))
    throw std::invalid_argument("decompose: basis unitary is not unitary within 1e-10");

  GellMannDecomposition out;
  out.c0 = (op.trace() / 3.0).real();
  Mat recon = out.c0 * identity(3);
  for (int i = 1; i <= 8; ++i) {
    const Mat basis = conjugated ? Mat(basis_u * gellmann(i) * basis_u.adjoint()) : gellmann(i);
    out.c(i - 1) = ((op * basis).trace() / 2.0).real();
    recon += out.c(i - 1) * basis;
  }
  out.residual = (op - recon).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace gur

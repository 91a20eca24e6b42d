#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "gur/linalg.hpp"

namespace gur {

// Deterministic random source for states, observables and property tests.
// Transformations are hand-rolled on top of mt19937_64 so that sequences
// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Cplx cgauss() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  CVec gaussian_vector(int dim) {
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cgauss();
    return v;
  }

  CVec unit_state_vector(int dim) {
    CVec v = gaussian_vector(dim);
    double n = v.norm();
    while (n < 1e-8) {
      v = gaussian_vector(dim);
      n = v.norm();
    }
    return v / n;
  }

  Eigen::VectorXd real_unit_vector(int dim) {
    Eigen::VectorXd v(dim);
    double n2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v(i) = normal();
      n2 = v.squaredNorm();
    } while (n2 < 1e-12);
    return v / std::sqrt(n2);
  }

  Mat gaussian_matrix(int dim) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = cgauss();
    return m;
  }

  Mat random_hermitian(int dim) {
    const Mat g = gaussian_matrix(dim);
    return (g + g.adjoint()) / 2.0;
  }

  /// Haar-ish unitary from the QR of a complex Gaussian matrix with the
  /// usual R-diagonal phase fix.
  Mat random_unitary(int dim) {
    const Mat g = gaussian_matrix(dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
      const Cplx rii = r(i, i);
      const double mag = std::abs(rii);
      if (mag > 1e-14) q.col(i) *= rii / mag;
    }
    return q;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gur

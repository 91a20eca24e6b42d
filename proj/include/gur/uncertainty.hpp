#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gur/algebra.hpp"
#include "gur/linalg.hpp"
#include "gur/random.hpp"
#include "gur/states.hpp"

namespace gur {

// ---------------------------------------------------------------------------
// The Q functional (exact matrix oracle)
// ---------------------------------------------------------------------------

/// Robertson-Schrodinger uncertainty value with its breakdown:
///   q = var_a * var_b - commutator_term - anticommutator_term
/// where commutator_term = |<[A,B]>/2|^2 and
/// anticommutator_term = |<{A,B}>/2 - <A><B>|^2.
struct QReport {
  double var_a = 0.0;
  double var_b = 0.0;
  double commutator_term = 0.0;
  double anticommutator_term = 0.0;
  double q = 0.0;
};

inline double expectation(const DensityMatrix& rho, const Mat& a) {
  if (a.rows() != rho.dim() || a.cols() != rho.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  const Cplx t = (rho.matrix() * a).trace();
  if (std::abs(t.imag()) > 1e-8)
    throw NumericalError("expectation has imaginary part " + fmt(t.imag()));
  return t.real();
}

/// <A^2> - <A>^2, clamped at zero against float cancellation near eigenstates.
inline double variance(const DensityMatrix& rho, const Mat& a) {
  const double m1 = expectation(rho, a);
  const double m2 = expectation(rho, Mat(a * a));
  return std::max(0.0, m2 - m1 * m1);
}

/// Exact evaluation by matrix arithmetic; the library's ground truth against
/// which every closed-form expression is judged.
inline QReport q_oracle(const DensityMatrix& rho, const Mat& a, const Mat& b) {
  if (a.rows() != rho.dim() || b.rows() != rho.dim())
    throw std::invalid_argument("q_oracle: dimension mismatch");
  require_hermitian(a, "q_oracle A");
  require_hermitian(b, "q_oracle B");

  QReport r;
  r.var_a = variance(rho, a);
  r.var_b = variance(rho, b);
  const double mean_a = expectation(rho, a);
  const double mean_b = expectation(rho, b);
  const Cplx comm_half = (rho.matrix() * commutator(a, b)).trace() / 2.0;
  const Cplx anti_half = (rho.matrix() * anticommutator(a, b)).trace() / 2.0;
  r.commutator_term = std::norm(comm_half);
  r.anticommutator_term = std::norm(anti_half - Cplx(mean_a * mean_b, 0.0));
  r.q = r.var_a * r.var_b - r.commutator_term - r.anticommutator_term;
  return r;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace detail {
inline void require_unit(double norm2, const char* what) {
  if (std::abs(norm2 - 1.0) > kPositivityTol)
    throw std::invalid_argument(std::string(what) + ": direction must be unit length");
}
}  // namespace detail

/// Q for qubit spin observables r.sigma, t.sigma on state (I + n.sigma)/2:
/// (1 - (r.t)^2)(1 - |n|^2). Exact.
inline double q_qubit_closed(const Vec3& r, const Vec3& t, const Vec3& n) {
  detail::require_unit(r.squaredNorm(), "q_qubit_closed r");
  detail::require_unit(t.squaredNorm(), "q_qubit_closed t");
  const double c = r.dot(t);
  return (1.0 - c * c) * (1.0 - n.squaredNorm());
}

/// Q for qutrit observables a.lambda, b.lambda on (I + sqrt(3) n.lambda)/3,
/// written term by term in the star/wedge contractions.
inline double q_qutrit_closed(const Vec8& a, const Vec8& b, const Vec8& n) {
  detail::require_unit(a.squaredNorm(), "q_qutrit_closed a");
  detail::require_unit(b.squaredNorm(), "q_qutrit_closed b");
  const double c = a.dot(b);
  const double alpha = star(a, a).dot(n);
  const double beta = star(b, b).dot(n);
  const double gamma = star(a, b).dot(n);
  const double u = a.dot(n);
  const double v = b.dot(n);
  const double w = wedge(a, b).dot(n);

  double q = (1.0 - c * c);
  q += alpha + beta - 2.0 * c * gamma;
  q += alpha * beta - gamma * gamma + 4.0 * c * u * v - 2.0 * u * u - 2.0 * v * v -
       3.0 * w * w;
  q -= 2.0 * alpha * v * v + 2.0 * beta * u * u - 4.0 * gamma * u * v;
  return (4.0 / 9.0) * q;
}

// ---------------------------------------------------------------------------
// Observable settings
// ---------------------------------------------------------------------------

struct QubitSpins {
  Vec3 r, t;
};

struct QutritPair {
  Vec8 a, b;
};

/// Product spin observables with all four directions in the x-y plane,
/// parametrized by the four azimuths.
struct PlanarTwoQubit {
  double phi_m = 0, phi_n = 0, phi_p = 0, phi_q = 0;
};

/// Two-qutrit observables built from the (lambda_i, lambda_j) region:
///   A = lambda_i x (cos t2 lambda_i + sin t2 lambda_j)
///   B = (cos t3 lambda_i + sin t3 lambda_j) x (cos t4 lambda_i + sin t4 lambda_j)
/// with (i,j) one of (1,2), (3,8), (4,5), (6,7).
struct TwoQutrit {
  int i = 1, j = 2;
  double theta2 = 0, theta3 = 0, theta4 = 0;
};

using Setting = std::variant<QubitSpins, QutritPair, PlanarTwoQubit, TwoQutrit>;

inline bool valid_two_qutrit_region(int i, int j) {
  return (i == 1 && j == 2) || (i == 3 && j == 8) || (i == 4 && j == 5) ||
         (i == 6 && j == 7);
}

inline std::pair<Mat, Mat> observables(const Setting& s) {
  if (const auto* qs = std::get_if<QubitSpins>(&s)) {
    detail::require_unit(qs->r.squaredNorm(), "QubitSpins r");
    detail::require_unit(qs->t.squaredNorm(), "QubitSpins t");
    Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
    for (int i = 0; i < 3; ++i) {
      a += qs->r(i) * pauli(i + 1);
      b += qs->t(i) * pauli(i + 1);
    }
    return {a, b};
  }
  if (const auto* qp = std::get_if<QutritPair>(&s)) {
    detail::require_unit(qp->a.squaredNorm(), "QutritPair a");
    detail::require_unit(qp->b.squaredNorm(), "QutritPair b");
    Mat a = Mat::Zero(3, 3), b = Mat::Zero(3, 3);
    for (int i = 0; i < 8; ++i) {
      a += qp->a(i) * gellmann(i + 1);
      b += qp->b(i) * gellmann(i + 1);
    }
    return {a, b};
  }
  if (const auto* pl = std::get_if<PlanarTwoQubit>(&s)) {
    auto planar = [](double phi) -> Mat {
      return std::cos(phi) * pauli(Axis::X) + std::sin(phi) * pauli(Axis::Y);
    };
    return {kron(planar(pl->phi_m), planar(pl->phi_n)),
            kron(planar(pl->phi_p), planar(pl->phi_q))};
  }
  const auto& tq = std::get<TwoQutrit>(s);
  if (!valid_two_qutrit_region(tq.i, tq.j))
    throw std::invalid_argument("TwoQutrit: (i,j) must be one of (1,2),(3,8),(4,5),(6,7)");
  auto mix = [&](double th) -> Mat {
    return std::cos(th) * gellmann(tq.i) + std::sin(th) * gellmann(tq.j);
  };
  return {kron(gellmann(tq.i), mix(tq.theta2)), kron(mix(tq.theta3), mix(tq.theta4))};
}

inline int setting_dim(const Setting& s) {
  if (std::holds_alternative<QubitSpins>(s)) return 2;
  if (std::holds_alternative<QutritPair>(s)) return 3;
  if (std::holds_alternative<PlanarTwoQubit>(s)) return 4;
  return 9;
}

// ---------------------------------------------------------------------------
// Deterministic maximization over a family's free angles
// ---------------------------------------------------------------------------

/// A settings template with identified free angles. `admissible` may exclude
/// degenerate regions (e.g. A proportional to B).
struct AngleFamily {
  int state_dim = 9;
  std::vector<std::pair<double, double>> domains;  // one [lo, hi) per free angle
  std::function<Setting(std::span<const double>)> make;
  std::function<bool(std::span<const double>)> admissible;  // may be empty
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Free angles (theta3, theta4), theta2 = theta3 + theta4 so that every
/// Schmidt pure state sits at Q = 0. theta3 is kept a safe distance from
/// 0 and pi where B degenerates into +-A.
inline AngleFamily two_qutrit_constrained_family(int i = 1, int j = 2, double guard = 1e-3) {
  AngleFamily fam;
  fam.state_dim = 9;
  fam.domains = {{0.0, kTwoPi}, {0.0, kTwoPi}};
  fam.make = [i, j](std::span<const double> a) -> Setting {
    return TwoQutrit{i, j, a[0] + a[1], a[0], a[1]};
  };
  fam.admissible = [guard](std::span<const double> a) {
    const double t3 = a[0];
    const double pi = std::numbers::pi;
    return std::abs(t3) > guard && std::abs(t3 - pi) > guard &&
           std::abs(t3 - kTwoPi) > guard;
  };
  return fam;
}

/// Free angles (theta2, theta3, theta4), unconstrained.
inline AngleFamily two_qutrit_free_family(int i = 1, int j = 2) {
  AngleFamily fam;
  fam.state_dim = 9;
  fam.domains = {{0.0, kTwoPi}, {0.0, kTwoPi}, {0.0, kTwoPi}};
  fam.make = [i, j](std::span<const double> a) -> Setting {
    return TwoQutrit{i, j, a[0], a[1], a[2]};
  };
  return fam;
}

/// Free azimuths (phi_m, phi_n, phi_p, phi_q) in the x-y plane.
inline AngleFamily planar_two_qubit_family() {
  AngleFamily fam;
  fam.state_dim = 4;
  fam.domains = {{0.0, kTwoPi}, {0.0, kTwoPi}, {0.0, kTwoPi}, {0.0, kTwoPi}};
  fam.make = [](std::span<const double> a) -> Setting {
    return PlanarTwoQubit{a[0], a[1], a[2], a[3]};
  };
  return fam;
}

struct MaxResult {
  double q_max = 0.0;
  Setting argmax;
  std::vector<double> angles;
};

namespace detail {

template <class F>
inline std::pair<double, double> golden_max(F&& f, double a, double b, double tol = 1e-11) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double x = (a + b) / 2.0;
  return {x, f(x)};
}

}  // namespace detail

/// Exhaustive uniform grid over the free angles followed by rounds of
/// coordinate-wise golden-section refinement around the incumbent. Fully
/// deterministic; grid ties resolve to the lowest lexicographic index.
inline MaxResult q_max_over_settings(const DensityMatrix& rho, const AngleFamily& fam,
                                     int grid, int refine_rounds) {
  if (grid < 8) throw std::invalid_argument("q_max_over_settings: grid must be >= 8");
  if (rho.dim() != fam.state_dim)
    throw std::invalid_argument("q_max_over_settings: state/family dimension mismatch");
  const int n = int(fam.domains.size());

  auto eval = [&](std::span<const double> angles) -> double {
    if (fam.admissible && !fam.admissible(angles)) return -1e300;
    auto [a, b] = observables(fam.make(angles));
    return q_oracle(rho, a, b).q;
  };

  std::vector<double> angles(n, 0.0), best_angles(n, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> counter(n, 0);
  while (true) {
    for (int k = 0; k < n; ++k) {
      const auto& [lo, hi] = fam.domains[k];
      angles[k] = lo + (hi - lo) * double(counter[k]) / double(grid);
    }
    const double q = eval(angles);
    if (q > best) {
      best = q;
      best_angles = angles;
    }
    int k = n - 1;
    while (k >= 0 && ++counter[k] == grid) {
      counter[k] = 0;
      --k;
    }
    if (k < 0) break;
  }

  for (int round = 0; round < refine_rounds; ++round) {
    for (int k = 0; k < n; ++k) {
      const auto& [lo, hi] = fam.domains[k];
      const double h = (hi - lo) / double(grid) / std::pow(2.0, round);
      const double a = std::max(lo, best_angles[k] - h);
      const double b = std::min(hi, best_angles[k] + h);
      auto line = [&](double x) {
        std::vector<double> t = best_angles;
        t[k] = x;
        return eval(t);
      };
      const auto [x, q] = detail::golden_max(line, a, b);
      if (q > best) {
        best = q;
        best_angles[k] = x;
      }
    }
  }

  MaxResult res;
  res.q_max = best;
  res.angles = best_angles;
  res.argmax = fam.make(best_angles);
  return res;
}

// ---------------------------------------------------------------------------
// Printed closed-form expressions (kept literal, never "corrected")
// ---------------------------------------------------------------------------

namespace formulas {

inline double eq13(double n8) { return (4.0 / 9.0) * (2.0 - n8) * (1.0 + n8); }

inline double eq14() { return 4.0 / 9.0; }

inline double eq15a(double n3, double n4) {
  const double s3 = std::sqrt(3.0);
  return (2.0 / 9.0) * (2.0 + s3 * n3) * (1.0 - 2.0 * n3 * n3) - n4 * n4 / 3.0;
}

inline double eq15b(double n3, double n4) {
  const double s3 = std::sqrt(3.0);
  return (1.0 / 9.0) * (4.0 - 8.0 * n3 * n3 - 4.0 * s3 * n3 * n3 * n3 - 11.0 * n4 * n4 +
                        2.0 * s3 * n3 * (1.0 + 4.0 * n4 * n4));
}

inline double eq17a(double n3, double n4, double n5) {
  const double s3 = std::sqrt(3.0);
  return (1.0 / 9.0) * (4.0 - 8.0 * n3 * n3 - 4.0 * s3 * n3 * n3 * n3 - 3.0 * n4 * n4 -
                        11.0 * n5 * n5 + 2.0 * s3 * n3 * (1.0 + 4.0 * n5 * n5));
}

inline double eq17b(double n3, double n4, double n5) {
  const double s3 = std::sqrt(3.0);
  return (1.0 / 9.0) * (4.0 - 8.0 * n3 * n3 - 4.0 * s3 * n3 * n3 * n3 - 3.0 * n5 * n5 -
                        11.0 * n4 * n4 + 2.0 * s3 * n3 * (1.0 + 4.0 * n4 * n4));
}

inline double pure2qt(double k1, double k2, double k3, double t2, double t3, double t4) {
  return 4.0 * k1 * k1 * k2 * k2 * k3 * k3 * std::sin(t2 - t3 - t4);
}

inline double mix(double k1, double k4, double k5, double k6, double p, double t3,
                  double t4) {
  const double c = std::cos(t3 + t4);
  const double s = std::sin(t3);
  return 4.0 * k1 * k1 * p * (1.0 - p) *
         (1.0 - k6 * k6 - 4.0 * k4 * k4 * k5 * k5 * (1.0 - p) * c * c) * s * s;
}

inline double eq21(double p) { return 1.5 * p * (1.0 - p); }

inline double eq22(double k1, double k6, double p) {
  return 4.0 * k1 * k1 * (1.0 - k6 * k6) * p * (1.0 - p);
}

inline double iso(double p, double t3, double t4) {
  const double inner = -3.0 - 3.0 * p + 2.0 * p * p + (-1.0 + p) * std::cos(2.0 * t3) +
                       2.0 * p * p * std::cos(2.0 * (t3 + t4));
  return (8.0 / 81.0) * (-1.0 + p) * inner * inner * std::sin(t3);
}

inline double eq24(double p) { return (2.0 / 3.0) * (1.0 - p * p); }

inline double eq25(double p) { return (16.0 / 81.0) * (1.0 - p) * (1.0 + 2.0 * p); }

}  // namespace formulas

/// Evaluate a printed expression by id with named parameters. Unknown ids and
/// missing parameters are rejected.
inline double q_family_formula(const std::string& id,
                               const std::map<std::string, double>& params) {
  auto get = [&](const char* name) -> double {
    auto it = params.find(name);
    if (it == params.end())
      throw std::invalid_argument("q_family_formula: missing parameter '" +
                                  std::string(name) + "' for " + id);
    return it->second;
  };
  if (id == "eq13") return formulas::eq13(get("n8"));
  if (id == "eq14") return formulas::eq14();
  if (id == "eq15a") return formulas::eq15a(get("n3"), get("n4"));
  if (id == "eq15b") return formulas::eq15b(get("n3"), get("n4"));
  if (id == "eq17a") return formulas::eq17a(get("n3"), get("n4"), get("n5"));
  if (id == "eq17b") return formulas::eq17b(get("n3"), get("n4"), get("n5"));
  if (id == "f_pure2qt")
    return formulas::pure2qt(get("k1"), get("k2"), get("k3"), get("theta2"), get("theta3"),
                             get("theta4"));
  if (id == "f_mix")
    return formulas::mix(get("k1"), get("k4"), get("k5"), get("k6"), get("p"),
                         get("theta3"), get("theta4"));
  if (id == "eq21") return formulas::eq21(get("p"));
  if (id == "eq22") return formulas::eq22(get("k1"), get("k6"), get("p"));
  if (id == "f_iso") return formulas::iso(get("p"), get("theta3"), get("theta4"));
  if (id == "eq24") return formulas::eq24(get("p"));
  if (id == "eq25") return formulas::eq25(get("p"));
  throw std::invalid_argument("q_family_formula: unknown formula id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Concordance: printed expression vs oracle on a deterministic grid
// ---------------------------------------------------------------------------

enum class Verdict { ExactMatch, ProportionalMatch, Mismatch };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ExactMatch: return "ExactMatch";
    case Verdict::ProportionalMatch: return "ProportionalMatch";
    case Verdict::Mismatch: return "Mismatch";
  }
  return "?";
}

struct GridRow {
  std::vector<double> params;
  double formula_value = 0.0;
  double oracle_value = 0.0;
};

struct ConcordanceReport {
  std::string formula_id;
  std::vector<std::string> param_names;
  std::string oracle_description;
  int grid_size = 0;
  double max_abs_diff = 0.0;
  double fitted_ratio = 1.0;  // oracle / formula where |formula| > 1e-8
  double ratio_spread = 0.0;
  Verdict verdict = Verdict::Mismatch;
  std::vector<GridRow> rows;
};

namespace detail {

inline void classify(ConcordanceReport& r) {
  r.grid_size = int(r.rows.size());
  double maxd = 0.0;
  for (const auto& row : r.rows)
    maxd = std::max(maxd, std::abs(row.formula_value - row.oracle_value));
  r.max_abs_diff = maxd;
  if (maxd < 1e-9) {
    r.verdict = Verdict::ExactMatch;
    r.fitted_ratio = 1.0;
    r.ratio_spread = 0.0;
    return;
  }
  std::vector<double> ratios;
  bool oracle_alive_where_formula_dead = false;
  for (const auto& row : r.rows) {
    if (std::abs(row.formula_value) > 1e-8)
      ratios.push_back(row.oracle_value / row.formula_value);
    else if (std::abs(row.oracle_value) > 1e-6)
      oracle_alive_where_formula_dead = true;
  }
  if (ratios.empty()) {
    r.verdict = Verdict::Mismatch;
    r.fitted_ratio = 0.0;
    r.ratio_spread = 0.0;
    return;
  }
  std::sort(ratios.begin(), ratios.end());
  r.fitted_ratio = ratios[ratios.size() / 2];
  double spread = 0.0;
  for (double x : ratios) spread = std::max(spread, std::abs(x - r.fitted_ratio));
  r.ratio_spread = spread;
  r.verdict = (!oracle_alive_where_formula_dead && spread < 1e-6 &&
               std::abs(r.fitted_ratio) > 1e-8)
                  ? Verdict::ProportionalMatch
                  : Verdict::Mismatch;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
  return out;
}

inline bool qutrit_bloch_valid(const Vec8& n) {
  const double s3 = std::sqrt(3.0);
  Mat rho = identity(3) / 3.0;
  for (int i = 0; i < 8; ++i) rho += (s3 / 3.0) * n(i) * gellmann(i + 1);
  return min_eigenvalue(rho) >= -1e-12;
}

// Zero-overlap Schmidt pairs for the mixture family grids.
inline std::vector<std::pair<std::array<double, 3>, std::array<double, 3>>>
orthogonal_mixture_configs() {
  const double r = 1.0 / std::sqrt(2.0);
  return {
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}},
      {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}},
      {{r, r, 0.0}, {r, -r, 0.0}},
      {{0.6, 0.8, 0.0}, {0.8, -0.6, 0.0}},
  };
}

// General Schmidt triples (not mutually orthogonal) for the two-qutrit grids.
inline std::vector<std::array<double, 3>> schmidt_configs() {
  const double a = 1.0 / std::sqrt(3.0);
  return {
      {a, a, a},
      {0.8, 0.6 * 0.8, std::sqrt(1.0 - 0.64 - 0.2304)},  // (0.8, 0.48, 0.36)
      {0.2, 0.96, std::sqrt(1.0 - 0.04 - 0.9216)},       // (0.2, 0.96, 0.2)
  };
}

}  // namespace detail

inline std::vector<std::string> formula_ids() {
  return {"eq5",   "eq11",  "eq13",  "eq14",  "eq15a",     "eq15b",
          "eq17a", "eq17b", "eq21",  "eq22",  "eq24",      "eq25",
          "f_pure2qt", "f_pure2qt_constrained", "f_mix", "f_iso", "eq26"};
}

/// Compare one printed expression against the oracle on a deterministic grid.
/// `grid` scales the grid density per axis.
inline ConcordanceReport run_concordance(const std::string& id, int grid = 24) {
  if (grid < 2) throw std::invalid_argument("run_concordance: grid must be >= 2");
  ConcordanceReport rep;
  rep.formula_id = id;
  const double s3 = std::sqrt(3.0);

  if (id == "eq5") {
    // Random spin directions and Bloch vectors; oracle is the matrix Q.
    rep.param_names = {"r_dot_t", "n_norm"};
    rep.oracle_description = "q_oracle(qubit_density(n), r.sigma, t.sigma)";
    Rng rng(1005);
    const int count = grid * grid;
    for (int s = 0; s < count; ++s) {
      const Vec3 r = rng.real_unit_vector(3);
      const Vec3 t = rng.real_unit_vector(3);
      Vec3 n = rng.real_unit_vector(3) * std::cbrt(rng.uniform());
      const auto [a, b] = observables(QubitSpins{r, t});
      const double oracle = q_oracle(qubit_density(n), a, b).q;
      const double c = r.dot(t);
      rep.rows.push_back({{c, n.norm()}, (1.0 - c * c) * (1.0 - n.squaredNorm()), oracle});
    }
  } else if (id == "eq11") {
    // The full star/wedge expansion for arbitrary qutrit settings.
    rep.param_names = {"a_dot_b", "n_norm"};
    rep.oracle_description = "q_oracle(qutrit_density(n), a.lambda, b.lambda)";
    Rng rng(1011);
    auto random_bloch = [&]() -> Vec8 {
      while (true) {
        Vec8 n;
        for (int i = 0; i < 8; ++i) n(i) = rng.normal();
        n *= rng.uniform() / n.norm();
        if (detail::qutrit_bloch_valid(n)) return n;
      }
    };
    const int count = grid * grid;
    for (int s = 0; s < count; ++s) {
      Vec8 a, b;
      for (int i = 0; i < 8; ++i) {
        a(i) = rng.normal();
        b(i) = rng.normal();
      }
      a /= a.norm();
      b /= b.norm();
      const Vec8 n = random_bloch();
      const auto [ma, mb] = observables(QutritPair{a, b});
      rep.rows.push_back(
          {{a.dot(b), n.norm()}, q_qutrit_closed(a, b, n), q_oracle(qutrit_density(n), ma, mb).q});
    }
  } else if (id == "eq13") {
    rep.param_names = {"b_index", "n8"};
    rep.oracle_description = "q_oracle(qutrit_density(n8 e8), lambda3, lambda_b), b in {7,6}";
    for (int b : {7, 6})
      for (double n8 : detail::linspace(-1.0, 0.5, grid)) {
        const DensityMatrix rho = qutrit_density(n8 * unit8(8));
        const double oracle = q_oracle(rho, gellmann(3), gellmann(b)).q;
        rep.rows.push_back({{double(b), n8}, formulas::eq13(n8), oracle});
      }
  } else if (id == "eq14") {
    rep.param_names = {"b_index", "n1"};
    rep.oracle_description =
        "q_oracle(qutrit_density(n1 e1), lambda3, lambda_b), b in {7,6,5,4}";
    for (int b : {7, 6, 5, 4})
      for (double n1 : detail::linspace(-1.0 / s3, 1.0 / s3, grid)) {
        const DensityMatrix rho = qutrit_density(n1 * unit8(1));
        const double oracle = q_oracle(rho, gellmann(3), gellmann(b)).q;
        rep.rows.push_back({{double(b), n1}, formulas::eq14(), oracle});
      }
  } else if (id == "eq15a" || id == "eq15b") {
    rep.param_names = {"n3", "n4"};
    const int b = (id == "eq15a") ? 5 : 4;
    rep.oracle_description = "q_oracle over the (n3, n4) section, B = lambda" +
                             std::to_string(b);
    for (double n3 : detail::linspace(-1.0 / s3, 1.0 / s3, grid))
      for (double n4 : detail::linspace(-0.82, 0.82, grid)) {
        const Vec8 n = n3 * unit8(3) + n4 * unit8(4);
        if (!detail::qutrit_bloch_valid(n)) continue;
        const double oracle = q_oracle(qutrit_density(n), gellmann(3), gellmann(b)).q;
        const double f = (id == "eq15a") ? formulas::eq15a(n3, n4) : formulas::eq15b(n3, n4);
        rep.rows.push_back({{n3, n4}, f, oracle});
      }
  } else if (id == "eq17a" || id == "eq17b") {
    rep.param_names = {"n3", "n4", "n5"};
    const int b = (id == "eq17a") ? 5 : 4;
    rep.oracle_description = "q_oracle over the (n3, n4, n5) section, B = lambda" +
                             std::to_string(b);
    const int m = std::max(4, grid / 3);
    for (double n3 : detail::linspace(-1.0 / s3, 1.0 / s3, m))
      for (double n4 : detail::linspace(-0.82, 0.82, m))
        for (double n5 : detail::linspace(-0.82, 0.82, m)) {
          const Vec8 n = n3 * unit8(3) + n4 * unit8(4) + n5 * unit8(5);
          if (!detail::qutrit_bloch_valid(n)) continue;
          const double oracle = q_oracle(qutrit_density(n), gellmann(3), gellmann(b)).q;
          const double f = (id == "eq17a") ? formulas::eq17a(n3, n4, n5)
                                           : formulas::eq17b(n3, n4, n5);
          rep.rows.push_back({{n3, n4, n5}, f, oracle});
        }
  } else if (id == "eq21") {
    // Printed linear entropy of the two-state mixture vs the d = 9 definition.
    // Zero-overlap component pairs so that a single ratio is well defined.
    rep.param_names = {"config", "p"};
    rep.oracle_description = "linear_entropy(mixture(p)) with orthogonal components";
    const auto configs = detail::orthogonal_mixture_configs();
    for (std::size_t ci = 0; ci < configs.size(); ++ci)
      for (double p : detail::linspace(0.0, 1.0, grid)) {
        const DensityMatrix rho = mixture(p, configs[ci].first, configs[ci].second);
        rep.rows.push_back({{double(ci), p}, formulas::eq21(p), linear_entropy(rho)});
      }
  } else if (id == "eq22") {
    rep.param_names = {"config", "p", "k1", "k6"};
    rep.oracle_description =
        "q_max_over_settings(mixture(p), two-qutrit (1,2) family, theta2 = theta3 + theta4)";
    const auto configs = detail::orthogonal_mixture_configs();
    const AngleFamily fam = two_qutrit_constrained_family();
    for (std::size_t ci = 0; ci < configs.size(); ++ci)
      for (double p : detail::linspace(0.0, 1.0, std::max(4, grid / 3))) {
        const DensityMatrix rho = mixture(p, configs[ci].first, configs[ci].second);
        const double oracle = q_max_over_settings(rho, fam, 24, 2).q_max;
        const double k1 = configs[ci].first[0];
        const double k6 = configs[ci].second[2];
        rep.rows.push_back({{double(ci), p, k1, k6}, formulas::eq22(k1, k6, p), oracle});
      }
  } else if (id == "eq24") {
    rep.param_names = {"p"};
    rep.oracle_description = "linear_entropy(isotropic(p)) at d = 9";
    for (double p : detail::linspace(0.0, 1.0, grid))
      rep.rows.push_back({{p}, formulas::eq24(p), linear_entropy(isotropic(p))});
  } else if (id == "eq25") {
    rep.param_names = {"p"};
    rep.oracle_description =
        "q_max_over_settings(isotropic(p), two-qutrit (1,2) family, theta2 = theta3 + theta4)";
    const AngleFamily fam = two_qutrit_constrained_family();
    for (double p : detail::linspace(0.0, 1.0, grid)) {
      const double oracle = q_max_over_settings(isotropic(p), fam, 32, 3).q_max;
      rep.rows.push_back({{p}, formulas::eq25(p), oracle});
    }
  } else if (id == "f_pure2qt" || id == "f_pure2qt_constrained") {
    const bool constrained = (id == "f_pure2qt_constrained");
    rep.param_names = {"config", "theta2", "theta3", "theta4"};
    rep.oracle_description = constrained
                                 ? "q_oracle(schmidt_pure, (1,2) settings, theta2 = theta3 + theta4)"
                                 : "q_oracle(schmidt_pure, (1,2) settings, free angles)";
    const auto ks = detail::schmidt_configs();
    const int m = std::max(4, grid / 3);
    const auto angles = detail::linspace(0.0, kTwoPi * (1.0 - 1.0 / m), m);
    for (std::size_t ci = 0; ci < ks.size(); ++ci) {
      const auto& k = ks[ci];
      const DensityMatrix rho = schmidt_pure(std::span<const double>(k.data(), 3));
      for (double t3 : angles)
        for (double t4 : angles) {
          const std::vector<double> t2s =
              constrained ? std::vector<double>{t3 + t4} : angles;
          for (double t2 : t2s) {
            const auto [a, b] = observables(TwoQutrit{1, 2, t2, t3, t4});
            const double oracle = q_oracle(rho, a, b).q;
            rep.rows.push_back(
                {{double(ci), t2, t3, t4},
                 formulas::pure2qt(k[0], k[1], k[2], t2, t3, t4),
                 oracle});
          }
        }
    }
  } else if (id == "f_mix") {
    rep.param_names = {"config", "p", "theta3", "theta4"};
    rep.oracle_description =
        "q_oracle(mixture(p), (1,2) settings, theta2 = theta3 + theta4)";
    const auto configs = detail::orthogonal_mixture_configs();
    const int m = std::max(4, grid / 3);
    const auto angles = detail::linspace(0.0, kTwoPi * (1.0 - 1.0 / m), m);
    for (std::size_t ci = 0; ci < configs.size(); ++ci)
      for (double p : detail::linspace(0.0, 1.0, m))
        for (double t3 : angles)
          for (double t4 : angles) {
            const DensityMatrix rho = mixture(p, configs[ci].first, configs[ci].second);
            const auto [a, b] = observables(TwoQutrit{1, 2, t3 + t4, t3, t4});
            const double oracle = q_oracle(rho, a, b).q;
            const auto& kb = configs[ci].second;
            rep.rows.push_back(
                {{double(ci), p, t3, t4},
                 formulas::mix(configs[ci].first[0], kb[0], kb[1], kb[2], p, t3, t4),
                 oracle});
          }
  } else if (id == "f_iso") {
    rep.param_names = {"p", "theta3", "theta4"};
    rep.oracle_description =
        "q_oracle(isotropic(p), (1,2) settings, theta2 = theta3 + theta4)";
    const int m = std::max(4, grid / 3);
    const auto angles = detail::linspace(0.0, kTwoPi * (1.0 - 1.0 / m), m);
    for (double p : detail::linspace(0.0, 1.0, m))
      for (double t3 : angles)
        for (double t4 : angles) {
          const auto [a, b] = observables(TwoQutrit{1, 2, t3 + t4, t3, t4});
          const double oracle = q_oracle(isotropic(p), a, b).q;
          rep.rows.push_back({{p, t3, t4}, formulas::iso(p, t3, t4), oracle});
        }
  } else if (id == "eq26") {
    // Measurement-algebra identities behind the budget counting: printed
    // coefficient vs the coefficient the matrices actually produce. The
    // (anti)commutator rows compare against {A,B} and (1/i)[A,B] directly.
    rep.param_names = {"identity", "component"};
    rep.oracle_description = "decompose over {I, lambda_1..lambda_8}";
    const Cplx im(0.0, 1.0);
    struct IdentityRow {
      int id;
      Mat op;
      int component;  // 0 = identity, else lambda index
      double printed;
    };
    const Mat l3 = gellmann(3), l6 = gellmann(6), l7 = gellmann(7);
    std::vector<IdentityRow> defs;
    defs.push_back({1, anticommutator(l3, l7), 7, -0.5});
    defs.push_back({2, Mat(-im * commutator(l3, l7)), 6, 0.5});
    defs.push_back({3, Mat(l3 * l3), 0, 2.0 / 3.0});
    defs.push_back({4, Mat(l3 * l3), 8, 1.0 / s3});
    defs.push_back({5, Mat(l7 * l7), 0, 2.0 / 3.0});
    defs.push_back({6, Mat(l7 * l7), 8, -1.0 / (2.0 * s3)});
    defs.push_back({7, Mat(l7 * l7), 3, -0.5});
    defs.push_back({8, Mat(-im * commutator(l3, l6)), 7, -0.5});
    defs.push_back({9, anticommutator(l3, l6), 6, -0.5});
    defs.push_back({10, Mat(l6 * l6), 0, 2.0 / 3.0});
    defs.push_back({11, Mat(l6 * l6), 8, -1.0 / (2.0 * s3)});
    defs.push_back({12, Mat(l6 * l6), 3, -0.5});
    for (const auto& defn : defs) {
      const auto dec = decompose(defn.op);
      const double computed = defn.component == 0 ? dec.c0 : dec.c(defn.component - 1);
      rep.rows.push_back({{double(defn.id), double(defn.component)}, defn.printed, computed});
    }
  } else {
    throw std::invalid_argument("run_concordance: unknown formula id '" + id + "'");
  }

  detail::classify(rep);
  return rep;
}

}  // namespace gur

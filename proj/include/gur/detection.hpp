#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gur/algebra.hpp"
#include "gur/states.hpp"
#include "gur/uncertainty.hpp"

namespace gur {

enum class PurityVerdict { Pure, Mixed };

inline const char* to_string(PurityVerdict v) {
  return v == PurityVerdict::Pure ? "Pure" : "Mixed";
}

// ---------------------------------------------------------------------------
// Sequential single-qutrit scheme
// ---------------------------------------------------------------------------

/// Configuration of the sequential test: A is held fixed while B walks the
/// pair sequence. A basis unitary conjugates every observable (measuring in
/// a rotated basis); the identity means the standard lambda basis.
///
/// When a pair splits (first member below epsilon, second not), the default
/// is to advance to the next pair — Mixed requires every pair to fail.
/// strict_pairs instead declares Mixed at the first split pair.
struct SchemeConfig {
  double epsilon = 1e-7;
  int fixed_a = 3;
  std::vector<std::pair<int, int>> pairs = {{7, 6}, {5, 4}, {1, 2}};
  bool strict_pairs = false;
  Mat basis;  // empty = identity

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("scheme: epsilon must be > 0");
    if (fixed_a < 1 || fixed_a > 8)
      throw std::invalid_argument("scheme: fixed_a must be a lambda index in 1..8");
    std::set<int> seen{fixed_a};
    for (const auto& [b1, b2] : pairs) {
      for (int b : {b1, b2}) {
        if (b < 1 || b > 8)
          throw std::invalid_argument("scheme: pair index must be in 1..8");
        if (!seen.insert(b).second)
          throw std::invalid_argument("scheme: pair indices must be distinct from each "
                                      "other and from fixed_a");
      }
    }
    if (basis.size() != 0 && !is_unitary(basis))
      throw std::invalid_argument("scheme: basis must be unitary");
  }

  Mat observable(int lambda_index) const {
    if (basis.size() == 0) return gellmann(lambda_index);
    return basis * gellmann(lambda_index) * basis.adjoint();
  }
};

struct SchemeStep {
  int a_index = 3;
  int b_index = 0;
  double q = 0.0;
  bool below = false;
};

struct MeasurementBudget {
  std::vector<std::vector<int>> per_step_new;  // newly required lambda indices
  int cumulative_total = 0;
};

/// Lambda indices whose expectations a single (A, B) step consumes: the
/// nonzero coefficients of A, B, A^2, B^2, i[A,B] and {A,B} over
/// {I, lambda_1..lambda_8}. Coefficients are computed, never table lookups.
inline std::vector<int> step_requirements(int a_index, int b_index,
                                          const Mat& basis = Mat()) {
  const Cplx im(0.0, 1.0);
  const Mat a = basis.size() == 0 ? gellmann(a_index)
                                  : Mat(basis * gellmann(a_index) * basis.adjoint());
  const Mat b = basis.size() == 0 ? gellmann(b_index)
                                  : Mat(basis * gellmann(b_index) * basis.adjoint());
  const std::vector<Mat> ops = {a,          b,          Mat(a * a),
                                Mat(b * b), Mat(im * commutator(a, b)),
                                anticommutator(a, b)};
  std::set<int> indices;
  for (const Mat& op : ops) {
    const auto dec = decompose(op, basis);
    for (int i = 1; i <= 8; ++i)
      if (std::abs(dec.c(i - 1)) > 1e-9) indices.insert(i);
  }
  return {indices.begin(), indices.end()};
}

/// Budget over an ordered list of (a, b) steps; counts newly-added indices
/// per step and the size of the overall union.
inline MeasurementBudget measurement_budget(const std::vector<std::pair<int, int>>& steps,
                                            const Mat& basis = Mat()) {
  MeasurementBudget budget;
  std::set<int> seen;
  for (const auto& [a, b] : steps) {
    std::vector<int> fresh;
    for (int idx : step_requirements(a, b, basis))
      if (seen.insert(idx).second) fresh.push_back(idx);
    budget.per_step_new.push_back(std::move(fresh));
  }
  budget.cumulative_total = int(seen.size());
  return budget;
}

struct SchemeTrace {
  std::vector<SchemeStep> steps;
  PurityVerdict verdict = PurityVerdict::Mixed;
  MeasurementBudget budget;
  double epsilon = 0.0;
};

/// Walk the pair sequence: measure Q(A, first member); if below epsilon,
/// measure the second member; two consecutive passes within one pair mean
/// Pure. Exhausting every pair means Mixed.
inline SchemeTrace run_qutrit_scheme(const DensityMatrix& rho, const SchemeConfig& cfg) {
  cfg.validate();
  if (rho.dim() != 3)
    throw std::invalid_argument("run_qutrit_scheme: state must be a qutrit");

  SchemeTrace trace;
  trace.epsilon = cfg.epsilon;
  const Mat a_obs = cfg.observable(cfg.fixed_a);
  std::vector<std::pair<int, int>> evaluated;

  auto step = [&](int b_index) -> bool {
    const double q = q_oracle(rho, a_obs, cfg.observable(b_index)).q;
    const bool below = q < cfg.epsilon;
    trace.steps.push_back({cfg.fixed_a, b_index, q, below});
    evaluated.emplace_back(cfg.fixed_a, b_index);
    return below;
  };

  trace.verdict = PurityVerdict::Mixed;
  for (const auto& [b1, b2] : cfg.pairs) {
    if (!step(b1)) continue;
    if (step(b2)) {
      trace.verdict = PurityVerdict::Pure;
      break;
    }
    if (cfg.strict_pairs) break;  // split pair: declare Mixed immediately
  }
  trace.budget = measurement_budget(evaluated, cfg.basis);
  return trace;
}

inline SchemeTrace run_qutrit_scheme(const Vec8& n, const SchemeConfig& cfg) {
  return run_qutrit_scheme(qutrit_density(n), cfg);
}

/// The quantity the traversal compares against epsilon: min over pairs of the
/// worse (larger) member. Zero exactly when some pair passes both members.
inline double scheme_decision_q(const DensityMatrix& rho, const SchemeConfig& cfg) {
  cfg.validate();
  const Mat a_obs = cfg.observable(cfg.fixed_a);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [b1, b2] : cfg.pairs) {
    const double q1 = q_oracle(rho, a_obs, cfg.observable(b1)).q;
    const double q2 = q_oracle(rho, a_obs, cfg.observable(b2)).q;
    best = std::min(best, std::max(q1, q2));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Two-qutrit classifier
// ---------------------------------------------------------------------------

/// Joint tensor expectations <lambda_a x lambda_b> consumed by one two-qutrit
/// setting: nonzero product-basis coefficients of A, B, A^2, B^2, i[A,B] and
/// {A,B}. Single-sided terms <lambda_a x I>, <I x lambda_b> are marginals of
/// any joint setting sharing that index; uncovered ones add (a, a).
inline std::vector<std::pair<int, int>> two_qutrit_expectations(const TwoQutrit& s) {
  const Cplx im(0.0, 1.0);
  const auto [a, b] = observables(s);
  const std::vector<Mat> ops = {a,          b,          Mat(a * a),
                                Mat(b * b), Mat(im * commutator(a, b)),
                                anticommutator(a, b)};
  std::set<std::pair<int, int>> pairs;
  std::set<int> left_singles, right_singles;
  const double tol = 1e-9;
  for (const Mat& op : ops) {
    for (int x = 1; x <= 8; ++x) {
      for (int y = 1; y <= 8; ++y) {
        const double c = ((op * kron(gellmann(x), gellmann(y))).trace() / 4.0).real();
        if (std::abs(c) > tol) pairs.insert({x, y});
      }
      const double cl = ((op * kron(gellmann(x), identity(3))).trace() / 6.0).real();
      if (std::abs(cl) > tol) left_singles.insert(x);
      const double cr = ((op * kron(identity(3), gellmann(x))).trace() / 6.0).real();
      if (std::abs(cr) > tol) right_singles.insert(x);
    }
  }
  for (int x : left_singles) {
    bool covered = false;
    for (const auto& [p, q] : pairs) covered = covered || p == x;
    if (!covered) pairs.insert({x, x});
  }
  for (int y : right_singles) {
    bool covered = false;
    for (const auto& [p, q] : pairs) covered = covered || q == y;
    if (!covered) pairs.insert({y, y});
  }
  return {pairs.begin(), pairs.end()};
}

struct TwoQutritClassification {
  PurityVerdict verdict = PurityVerdict::Mixed;
  double q_max = 0.0;
  TwoQutrit argmax;
  std::vector<std::pair<int, int>> expectations_used;
  double epsilon = 0.0;
};

/// Maximize Q over the (1,2)-region settings on the theta2 = theta3 + theta4
/// manifold (theta3 kept away from the degenerate 0 and pi), then call Mixed
/// iff the maximum reaches epsilon.
inline TwoQutritClassification classify_two_qutrit(const DensityMatrix& rho, double epsilon,
                                                   int grid = 48, int refine_rounds = 3) {
  if (rho.dim() != 9)
    throw std::invalid_argument("classify_two_qutrit: state must be two qutrits");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("classify_two_qutrit: epsilon must be > 0");

  const AngleFamily fam = two_qutrit_constrained_family();
  const MaxResult max = q_max_over_settings(rho, fam, grid, refine_rounds);

  TwoQutritClassification out;
  out.epsilon = epsilon;
  out.q_max = max.q_max;
  out.argmax = std::get<TwoQutrit>(max.argmax);
  out.verdict = max.q_max >= epsilon ? PurityVerdict::Mixed : PurityVerdict::Pure;

  // Union of expectations over representative settings plus the argmax.
  std::set<std::pair<int, int>> used;
  const std::vector<std::pair<double, double>> probes = {
      {0.7, 0.4}, {1.9, 2.2}, {2.9, 5.1}, {4.1, 1.3}};
  for (const auto& [t3, t4] : probes)
    for (const auto& p : two_qutrit_expectations(TwoQutrit{1, 2, t3 + t4, t3, t4}))
      used.insert(p);
  for (const auto& p : two_qutrit_expectations(out.argmax)) used.insert(p);
  out.expectations_used = {used.begin(), used.end()};
  return out;
}

// ---------------------------------------------------------------------------
// Budget counts for the other systems (the tomography-vs-scheme table)
// ---------------------------------------------------------------------------

/// Spin settings consumed by one qubit step: every operator in
/// {A, B, A^2, B^2, i[A,B], {A,B}} is c I + d (u.sigma), so each contributes
/// at most one spin direction; directions are deduplicated up to sign.
inline int qubit_measurement_count(const Vec3& r, const Vec3& t) {
  const Cplx im(0.0, 1.0);
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  for (int i = 0; i < 3; ++i) {
    a += r(i) * pauli(i + 1);
    b += t(i) * pauli(i + 1);
  }
  const std::vector<Mat> ops = {a,          b,          Mat(a * a),
                                Mat(b * b), Mat(im * commutator(a, b)),
                                anticommutator(a, b)};
  std::vector<Vec3> directions;
  for (const Mat& op : ops) {
    Vec3 d;
    for (int i = 0; i < 3; ++i) d(i) = ((op * pauli(i + 1)).trace() / 2.0).real();
    if (d.norm() < 1e-9) continue;
    d /= d.norm();
    bool known = false;
    for (const auto& e : directions)
      known = known || (d - e).norm() < 1e-9 || (d + e).norm() < 1e-9;
    if (!known) directions.push_back(d);
  }
  return int(directions.size());
}

/// Measurements consumed by one planar two-qubit step: the two product
/// settings <A>, <B> plus each distinct non-identity product-Pauli term of
/// A^2, B^2, i[A,B], {A,B}. Marginals are counted individually here, which is
/// the convention behind the published 3-5 two-qubit range.
inline int planar_two_qubit_measurement_count(const PlanarTwoQubit& s) {
  const Cplx im(0.0, 1.0);
  const auto [a, b] = observables(s);
  const std::vector<Mat> derived = {Mat(a * a), Mat(b * b), Mat(im * commutator(a, b)),
                                    anticommutator(a, b)};
  std::set<std::pair<int, int>> terms;  // (x, y) with 0 = identity factor
  const double tol = 1e-9;
  for (const Mat& op : derived) {
    for (int x = 1; x <= 3; ++x) {
      for (int y = 1; y <= 3; ++y) {
        const double c = ((op * kron(pauli(x), pauli(y))).trace() / 4.0).real();
        if (std::abs(c) > tol) terms.insert({x, y});
      }
      const double cl = ((op * kron(pauli(x), identity(2))).trace() / 4.0).real();
      if (std::abs(cl) > tol) terms.insert({x, 0});
      const double cr = ((op * kron(identity(2), pauli(x))).trace() / 4.0).real();
      if (std::abs(cr) > tol) terms.insert({0, x});
    }
  }
  return 2 + int(terms.size());
}

struct BudgetTableRow {
  std::string system;
  int tomography = 0;          // printed column
  std::string gur_printed;     // printed column
  std::string gur_computed;    // derived from the budget machinery
  std::string counting;        // which convention the computed number uses
};

/// The measurement-count comparison table. Printed columns are reproduced
/// verbatim; the computed column is derived from representative traversals.
inline std::vector<BudgetTableRow> budget_table() {
  auto range = [](int lo, int hi) {
    return lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
  };

  // Single qubit: representative non-parallel spin pairs.
  int qb_min = 99, qb_max = 0;
  const std::vector<std::pair<Vec3, Vec3>> spin_pairs = {
      {Vec3(0, 0, 1), Vec3(1, 0, 0)},
      {Vec3(0, 0, 1), Vec3(0, 1, 0)},
      {Vec3(1, 0, 0), Vec3(std::sqrt(0.5), std::sqrt(0.5), 0)},
      {Vec3(std::sqrt(0.5), 0, std::sqrt(0.5)), Vec3(0, 1, 0)},
  };
  for (const auto& [r, t] : spin_pairs) {
    const int c = qubit_measurement_count(r, t);
    qb_min = std::min(qb_min, c);
    qb_max = std::max(qb_max, c);
  }

  // Two qubits: planar angle grid (identical pairs excluded).
  int q2_min = 99, q2_max = 0;
  const std::vector<double> phis = {0.0, 0.5, 1.0, std::numbers::pi / 2, 2.2, 4.0};
  for (double pm : phis)
    for (double pn : phis)
      for (double pp : phis)
        for (double pq : phis) {
          if (std::abs(pm - pp) < 1e-12 && std::abs(pn - pq) < 1e-12) continue;
          const int c = planar_two_qubit_measurement_count({pm, pn, pp, pq});
          q2_min = std::min(q2_min, c);
          q2_max = std::max(q2_max, c);
        }

  // Single qutrit: pure state caught at the first pair vs a full traversal.
  const SchemeConfig cfg;
  const SchemeTrace pure_trace = run_qutrit_scheme(-1.0 * unit8(8), cfg);
  std::vector<std::pair<int, int>> all_steps;
  for (const auto& [b1, b2] : cfg.pairs) {
    all_steps.emplace_back(cfg.fixed_a, b1);
    all_steps.emplace_back(cfg.fixed_a, b2);
  }
  const int qt_min = pure_trace.budget.cumulative_total;
  const int qt_max = measurement_budget(all_steps).cumulative_total;

  // Two qutrits: joint-expectation counts over representative settings.
  int tq_min = 99, tq_max = 0;
  const std::vector<std::pair<double, double>> tq_probes = {
      {std::numbers::pi / 2, 0.0}, {0.7, 0.4}, {1.9, 2.2}, {2.9, 5.1}, {4.1, 1.3}};
  for (const auto& [t3, t4] : tq_probes) {
    const int c = int(two_qutrit_expectations(TwoQutrit{1, 2, t3 + t4, t3, t4}).size());
    tq_min = std::min(tq_min, c);
    tq_max = std::max(tq_max, c);
  }

  return {
      {"single qubit", 3, "3", range(qb_min, qb_max), "spin directions"},
      {"two qubit", 15, "3-5", range(q2_min, q2_max),
       "product settings + basis terms, marginals counted"},
      {"single qutrit", 8, "4-8", range(qt_min, qt_max), "lambda expectations"},
      {"two qutrit", 80, "4-8", range(tq_min, tq_max),
       "joint lambda x lambda settings, marginals free"},
  };
}

// ---------------------------------------------------------------------------
// Blind spots
// ---------------------------------------------------------------------------

/// Interval of mixed states a scheme classifies Pure at tolerance epsilon.
/// threshold solves q_max(param) = epsilon by bisection against the oracle;
/// the printed closed-form threshold, where the text gives one, rides along
/// for comparison.
struct BlindSpotResult {
  std::string family;
  double epsilon = 0.0;
  double threshold = 0.0;
  bool full_range = false;
  double interval_lo = 0.0;  // mixed states classified Pure: [lo, hi]
  double interval_hi = 0.0;
  double paper_threshold = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

/// q_of must vanish at pure_end and grow toward mixed_end. Scans from the
/// pure end outward, then bisects the epsilon crossing to 1e-12 in the
/// parameter.
template <class QFn>
inline BlindSpotResult blind_spot_scan(std::string family, QFn&& q_of, double pure_end,
                                       double mixed_end, double eps) {
  BlindSpotResult out;
  out.family = std::move(family);
  out.epsilon = eps;

  const int scan_points = 256;
  double below = pure_end;  // q < eps side
  double above = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i <= scan_points; ++i) {
    const double t = double(i) / double(scan_points);
    const double param = pure_end + (mixed_end - pure_end) * t;
    if (q_of(param) >= eps) {
      above = param;
      break;
    }
    below = param;
  }
  if (std::isnan(above)) {
    out.full_range = true;
    out.threshold = mixed_end;
    out.interval_lo = std::min(pure_end, mixed_end);
    out.interval_hi = std::max(pure_end, mixed_end);
    return out;
  }
  while (std::abs(above - below) > 1e-12) {
    const double mid = (above + below) / 2.0;
    if (q_of(mid) >= eps)
      above = mid;
    else
      below = mid;
  }
  out.threshold = (above + below) / 2.0;
  out.interval_lo = std::min(pure_end, out.threshold);
  out.interval_hi = std::max(pure_end, out.threshold);
  return out;
}

}  // namespace detail

/// Qubit with orthogonal spin settings (z, x): q(n) = 1 - n^2 by the oracle;
/// the printed threshold sqrt(1 - 2 eps / 3) rides along.
inline BlindSpotResult blind_spot_qubit_orthogonal(double eps) {
  auto q_of = [](double n) {
    const DensityMatrix rho = qubit_density(Vec3(0.0, 0.0, n));
    return q_oracle(rho, pauli(Axis::Z), pauli(Axis::X)).q;
  };
  BlindSpotResult out = detail::blind_spot_scan("qubit_orthogonal", q_of, 1.0, 0.0, eps);
  out.paper_threshold = eps <= 1.5 ? std::sqrt(1.0 - 2.0 * eps / 3.0)
                                   : std::numeric_limits<double>::quiet_NaN();
  return out;
}

/// Two-qutrit isotropic family under the constrained-settings maximizer;
/// printed threshold sqrt(1 - 3 eps / 2).
inline BlindSpotResult blind_spot_isotropic(double eps, int grid = 24, int refine_rounds = 2) {
  const AngleFamily fam = two_qutrit_constrained_family();
  auto q_of = [&](double p) {
    return q_max_over_settings(isotropic(p), fam, grid, refine_rounds).q_max;
  };
  BlindSpotResult out = detail::blind_spot_scan("isotropic", q_of, 1.0, 0.0, eps);
  out.paper_threshold = eps <= 2.0 / 3.0 ? std::sqrt(1.0 - 1.5 * eps)
                                         : std::numeric_limits<double>::quiet_NaN();
  return out;
}

/// Single-qutrit one-parameter family under the Fig.-style traversal. Only
/// index 8 has a pure member (n8 = -1); the parameter runs over the monotone
/// mixedness segment [-1, 0].
inline BlindSpotResult blind_spot_one_param_qutrit(int index, double eps,
                                                   const SchemeConfig& cfg = SchemeConfig{}) {
  if (index != 8)
    throw std::invalid_argument(
        "blind_spot_one_param_qutrit: only the index-8 family has a pure endpoint");
  auto q_of = [&](double n8) {
    return scheme_decision_q(qutrit_density(n8 * unit8(8)), cfg);
  };
  return detail::blind_spot_scan("one_param_qutrit_8", q_of, -1.0, 0.0, eps);
}

}  // namespace gur

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "gur/gur.hpp"

using namespace gur;

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

TEST_CASE("scheme: pure -e8 state caught at the first pair with budget 4") {
  const SchemeTrace t = run_qutrit_scheme(-1.0 * unit8(8), SchemeConfig{});
  REQUIRE(t.verdict == PurityVerdict::Pure);
  REQUIRE(t.steps.size() == 2);
  REQUIRE(t.steps[0].b_index == 7);
  REQUIRE(t.steps[1].b_index == 6);
  REQUIRE(t.budget.cumulative_total == 4);
  REQUIRE(t.budget.per_step_new[0] == std::vector<int>{3, 6, 7, 8});
  REQUIRE(t.budget.per_step_new[1].empty());
}

TEST_CASE("scheme: maximally mixed state fails every pair") {
  const SchemeTrace t = run_qutrit_scheme(Vec8::Zero(), SchemeConfig{});
  REQUIRE(t.verdict == PurityVerdict::Mixed);
  REQUIRE(t.steps.size() == 3);  // every pair fails at its first member
  for (const auto& s : t.steps) REQUIRE(std::abs(s.q - 4.0 / 9.0) < 1e-12);
}

TEST_CASE("scheme: the lambda1 family is mixed everywhere") {
  const SchemeTrace t = run_qutrit_scheme(one_param_qutrit(1, 0.5), SchemeConfig{});
  REQUIRE(t.verdict == PurityVerdict::Mixed);
}

TEST_CASE("scheme: two-parameter pure point detected at the second pair") {
  const Vec8 n = two_param_qutrit({3, 4}, {1.0 / kSqrt3, std::sqrt(2.0 / 3.0)});
  const SchemeTrace t = run_qutrit_scheme(n, SchemeConfig{});
  REQUIRE(t.verdict == PurityVerdict::Pure);
  REQUIRE(t.steps.back().b_index == 4);
  REQUIRE(t.budget.cumulative_total <= 8);
}

TEST_CASE("scheme: verdict is monotone in epsilon") {
  const Vec8 n = one_param_qutrit(8, -0.99);
  double q = scheme_decision_q(qutrit_density(n), SchemeConfig{});
  SchemeConfig below;
  below.epsilon = q / 2.0;
  SchemeConfig above;
  above.epsilon = q * 2.0;
  REQUIRE(run_qutrit_scheme(n, below).verdict == PurityVerdict::Mixed);
  REQUIRE(run_qutrit_scheme(n, above).verdict == PurityVerdict::Pure);
}

TEST_CASE("scheme: strict pair handling stops at a split pair") {
  // Build a configuration whose first pair splits. On the lambda1 family
  // Q(l3, l2) = (4/9)(1 - 3 n1^2) and Q(l3, l1) = (4/9)(1 - 2 n1^2); at
  // n1 = 0.55 these bracket epsilon = 0.1, so the (2,1) pair passes its
  // first member and fails its second.
  SchemeConfig cfg;
  cfg.pairs = {{2, 1}, {7, 6}, {5, 4}};
  cfg.epsilon = 0.1;
  const Vec8 n = one_param_qutrit(1, 0.55);

  const SchemeTrace lax = run_qutrit_scheme(n, cfg);
  REQUIRE(lax.steps.size() == 4);  // advanced past the split pair
  REQUIRE(lax.verdict == PurityVerdict::Mixed);
  REQUIRE(lax.steps[0].below);
  REQUIRE(!lax.steps[1].below);

  cfg.strict_pairs = true;
  const SchemeTrace strict = run_qutrit_scheme(n, cfg);
  REQUIRE(strict.steps.size() == 2);
  REQUIRE(strict.verdict == PurityVerdict::Mixed);
}

TEST_CASE("scheme config validation") {
  SchemeConfig bad;
  bad.epsilon = 0.0;
  REQUIRE_THROWS_AS(run_qutrit_scheme(Vec8::Zero(), bad), std::invalid_argument);
  SchemeConfig clash;
  clash.pairs = {{3, 6}, {5, 4}, {1, 2}};  // fixed_a appears in a pair
  REQUIRE_THROWS_AS(run_qutrit_scheme(Vec8::Zero(), clash), std::invalid_argument);
  REQUIRE_THROWS_AS(run_qutrit_scheme(random_density(2, 1), SchemeConfig{}),
                    std::invalid_argument);
}

TEST_CASE("budget: step requirement sets are computed, not assumed") {
  REQUIRE(step_requirements(3, 7) == std::vector<int>{3, 6, 7, 8});
  REQUIRE(step_requirements(3, 6) == std::vector<int>{3, 6, 7, 8});

  // nothing new when the sixth follows the seventh
  const MeasurementBudget two = measurement_budget({{3, 7}, {3, 6}});
  REQUIRE(two.cumulative_total == 4);
  REQUIRE(two.per_step_new[1].empty());

  // a full traversal needs every lambda expectation exactly once
  const MeasurementBudget full =
      measurement_budget({{3, 7}, {3, 6}, {3, 5}, {3, 4}, {3, 1}, {3, 2}});
  REQUIRE(full.cumulative_total == 8);
}

TEST_CASE("budget: scheme covariance under a basis rotation") {
  Rng rng(99);
  for (int t = 0; t < 20; ++t) {
    const Mat u = rng.random_unitary(3);
    const DensityMatrix rho = random_density(3, 500 + t);
    SchemeConfig rotated;
    rotated.basis = u;
    const SchemeTrace t0 = run_qutrit_scheme(rho, SchemeConfig{});
    const SchemeTrace t1 =
        run_qutrit_scheme(DensityMatrix(unitary_conjugate(rho.matrix(), u)), rotated);
    REQUIRE(t0.verdict == t1.verdict);
    REQUIRE(t0.steps.size() == t1.steps.size());
    for (std::size_t s = 0; s < t0.steps.size(); ++s)
      REQUIRE(std::abs(t0.steps[s].q - t1.steps[s].q) < 1e-10);
    REQUIRE(t0.budget.cumulative_total == t1.budget.cumulative_total);
  }
}

TEST_CASE("two-qutrit classifier: pure Schmidt states pass, isotropic mixes fail") {
  const auto pure = classify_two_qutrit(schmidt_pure({0.6, 0.8, 0.0}), 1e-7, 24, 2);
  REQUIRE(pure.verdict == PurityVerdict::Pure);
  REQUIRE(pure.q_max < 1e-9);

  const auto iso = classify_two_qutrit(isotropic(0.5), 1e-7, 24, 2);
  REQUIRE(iso.verdict == PurityVerdict::Mixed);
  REQUIRE(std::abs(iso.q_max - formulas::eq25(0.5)) < 1e-8);

  // exactly the eight joint settings
  const std::set<std::pair<int, int>> expect = {{1, 1}, {1, 2}, {2, 1}, {2, 2},
                                                {3, 3}, {3, 8}, {8, 3}, {8, 8}};
  const std::set<std::pair<int, int>> got(iso.expectations_used.begin(),
                                          iso.expectations_used.end());
  REQUIRE(got == expect);

  REQUIRE_THROWS_AS(classify_two_qutrit(random_density(3, 1), 1e-7), std::invalid_argument);
}

TEST_CASE("two-qutrit classifier: Schmidt-diagonal mixtures sit in its blind spot") {
  // On the whole theta2 = theta3 + theta4 manifold every mixture of two
  // Schmidt-diagonal pure states reproduces pure-state correlations, so the
  // constrained classifier reads Pure; leaving the manifold exposes it.
  const DensityMatrix mix = mixture(0.5, {1, 0, 0}, {0, 1, 0});
  const auto cls = classify_two_qutrit(mix, 1e-7, 24, 2);
  REQUIRE(cls.q_max < 1e-9);
  REQUIRE(cls.verdict == PurityVerdict::Pure);
  REQUIRE(q_max_over_settings(mix, two_qutrit_free_family(), 16, 3).q_max > 0.5);
}

TEST_CASE("blind spots: thresholds solve q(threshold) = epsilon against the oracle") {
  for (double eps : {1e-2, 1e-4}) {
    const BlindSpotResult qb = blind_spot_qubit_orthogonal(eps);
    REQUIRE(!qb.full_range);
    REQUIRE(std::abs(qb.threshold - std::sqrt(1.0 - eps)) < 1e-9);
    REQUIRE(std::abs(qb.paper_threshold - std::sqrt(1.0 - 2.0 * eps / 3.0)) < 1e-12);
    REQUIRE(qb.interval_hi == 1.0);

    const BlindSpotResult iso = blind_spot_isotropic(eps);
    REQUIRE(!iso.full_range);
    const AngleFamily fam = two_qutrit_constrained_family();
    const double q_at_thr =
        q_max_over_settings(isotropic(iso.threshold), fam, 24, 2).q_max;
    REQUIRE(std::abs(q_at_thr - eps) < 1e-8);
  }
}

TEST_CASE("blind spots: the index-8 family") {
  // decision quantity on [-1, 0] is (4/9)(1 + n8)^2, so the threshold is
  // -1 + 1.5 sqrt(eps)
  const BlindSpotResult b = blind_spot_one_param_qutrit(8, 1e-2);
  REQUIRE(!b.full_range);
  REQUIRE(std::abs(b.threshold - (-1.0 + 1.5 * std::sqrt(1e-2))) < 1e-9);
  REQUIRE(b.interval_lo == -1.0);

  const BlindSpotResult full = blind_spot_one_param_qutrit(8, 4.0 / 9.0 + 1e-6);
  REQUIRE(full.full_range);

  REQUIRE_THROWS_AS(blind_spot_one_param_qutrit(1, 1e-2), std::invalid_argument);
}

TEST_CASE("blind spots: verdicts flip exactly at the threshold") {
  const double eps = 1e-2;
  const BlindSpotResult b = blind_spot_one_param_qutrit(8, eps);
  SchemeConfig cfg;
  cfg.epsilon = eps;
  // inside the blind interval mixed states read Pure, outside they read Mixed
  for (double delta : {1e-3, 1e-2, 0.1}) {
    const double inside = b.threshold - delta;
    const double outside = b.threshold + delta;
    if (inside > -1.0)
      REQUIRE(run_qutrit_scheme(one_param_qutrit(8, inside), cfg).verdict ==
              PurityVerdict::Pure);
    if (outside <= 0.0)
      REQUIRE(run_qutrit_scheme(one_param_qutrit(8, outside), cfg).verdict ==
              PurityVerdict::Mixed);
  }
  // completeness: every family state with more mixedness than the threshold
  // allows is caught
  for (int s = 0; s < 20; ++s) {
    const double n8 = b.threshold + (0.0 - b.threshold) * (s + 1) / 21.0;
    REQUIRE(run_qutrit_scheme(one_param_qutrit(8, n8), cfg).verdict ==
            PurityVerdict::Mixed);
  }
}

TEST_CASE("budget table reproduces the published columns") {
  const auto rows = budget_table();
  REQUIRE(rows.size() == 4);
  REQUIRE(rows[0].tomography == 3);
  REQUIRE(rows[1].tomography == 15);
  REQUIRE(rows[2].tomography == 8);
  REQUIRE(rows[3].tomography == 80);
  REQUIRE(rows[0].gur_computed == "3");
  REQUIRE(rows[1].gur_computed == "3-5");
  REQUIRE(rows[2].gur_computed == "4-8");
  REQUIRE(rows[3].gur_computed == "4-8");
  for (std::size_t i = 0; i < 4; ++i) REQUIRE(rows[i].gur_printed == rows[i].gur_computed);
}

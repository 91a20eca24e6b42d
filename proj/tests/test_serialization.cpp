#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gur/gur.hpp"

using namespace gur;

TEST_CASE("state parsing: bloch vectors") {
  const DensityMatrix q3 = parse_state(json::parse(
      R"({"kind":"bloch","dim":3,"n":[0,0,0,0,0,0,0,0]})"));
  REQUIRE(q3.dim() == 3);
  REQUIRE((q3.matrix() - identity(3) / 3.0).cwiseAbs().maxCoeff() < 1e-12);

  const DensityMatrix q2 =
      parse_state(json::parse(R"({"kind":"bloch","dim":2,"n":[0,0,1]})"));
  REQUIRE(std::abs(purity(q2) - 1.0) < 1e-12);

  REQUIRE_THROWS_AS(parse_state(json::parse(R"({"kind":"bloch","dim":3,"n":[0,0,1]})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_state(json::parse(R"({"kind":"bloch","dim":5,"n":[0,0,1]})")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_state(json::parse(R"({"dim":2,"n":[0,0,1]})")),
                    std::invalid_argument);
}

TEST_CASE("state parsing: raw density matrices round-trip") {
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = random_density(3, 300 + t);
    json re = json::array(), im = json::array();
    for (int r = 0; r < 3; ++r) {
      json rrow = json::array(), irow = json::array();
      for (int c = 0; c < 3; ++c) {
        rrow.push_back(rho.matrix()(r, c).real());
        irow.push_back(rho.matrix()(r, c).imag());
      }
      re.push_back(rrow);
      im.push_back(irow);
    }
    const json j = {{"kind", "density"}, {"dim", 3}, {"re", re}, {"im", im}};
    const DensityMatrix back = parse_state(j);
    REQUIRE((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }

  REQUIRE_THROWS_AS(
      parse_state(json::parse(R"({"kind":"density","dim":2,"re":[[1,0],[0,0],[0,0]]})")),
      std::invalid_argument);
}

TEST_CASE("state parsing: families") {
  const DensityMatrix iso = parse_state(
      json::parse(R"({"kind":"family","name":"isotropic","params":{"p":0.5}})"));
  REQUIRE((iso.matrix() - isotropic(0.5).matrix()).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix one = parse_state(json::parse(
      R"({"kind":"family","name":"one_param","params":{"index":8,"value":-1}})"));
  REQUIRE(std::abs(purity(one) - 1.0) < 1e-12);

  const DensityMatrix mix = parse_state(json::parse(
      R"({"kind":"family","name":"mixture","params":{"p":0.5,"k1":[1,0,0],"k2":[0,1,0]}})"));
  REQUIRE(std::abs(purity(mix) - 0.5) < 1e-12);

  const DensityMatrix schmidt = parse_state(
      json::parse(R"({"kind":"family","name":"schmidt","params":{"k":[0.6,0.8]}})"));
  REQUIRE(schmidt.dim() == 4);

  REQUIRE_THROWS_AS(
      parse_state(json::parse(R"({"kind":"family","name":"nope","params":{}})")),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      parse_state(json::parse(R"({"kind":"family","name":"isotropic","params":{}})")),
      std::invalid_argument);
}

TEST_CASE("observable parsing") {
  REQUIRE((parse_observable("lambda3", 3) - gellmann(3)).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE((parse_observable("sigmax", 2) - pauli(Axis::X)).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE((parse_observable("spinz", 3) - spin1(Axis::Z)).cwiseAbs().maxCoeff() < 1e-14);

  const Mat dir = parse_observable(R"({"dir":[0,0,1]})", 2);
  REQUIRE((dir - pauli(Axis::Z)).cwiseAbs().maxCoeff() < 1e-14);

  const Mat raw = parse_observable(R"({"re":[[0,1],[1,0]]})", 2);
  REQUIRE((raw - pauli(Axis::X)).cwiseAbs().maxCoeff() < 1e-14);

  REQUIRE_THROWS_AS(parse_observable("lambda3", 2), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_observable("lambda9", 3), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_observable("banana", 3), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_observable(R"({"re":[[0,1],[0,0]]})", 2), std::invalid_argument);
}

TEST_CASE("report serialization carries the schema fields") {
  const QReport q = q_oracle(qutrit_density(Vec8::Zero()), gellmann(3), gellmann(7));
  const json jq = to_json(q);
  REQUIRE(jq.contains("var_a"));
  REQUIRE(jq.contains("commutator_term"));
  REQUIRE(std::abs(jq["q"].get<double>() - 4.0 / 9.0) < 1e-12);

  const SchemeTrace t = run_qutrit_scheme(-1.0 * unit8(8), SchemeConfig{});
  const json jt = to_json(t);
  REQUIRE(jt["verdict"] == "Pure");
  REQUIRE(jt["budget"]["total"] == 4);
  REQUIRE(jt["steps"].size() == 2);
  REQUIRE(jt["steps"][0].contains("a"));
  REQUIRE(jt["steps"][0].contains("below"));

  const json jb = to_json(blind_spot_qubit_orthogonal(1e-2));
  REQUIRE(jb["family"] == "qubit_orthogonal");
  REQUIRE(jb.contains("paper_threshold"));
}

TEST_CASE("csv formatting: 17 significant digits, stable layout") {
  REQUIRE(csv_double(0.5) == "0.5");
  REQUIRE(csv_double(1.0 / 3.0) == "0.33333333333333331");

  const ConcordanceReport rep = run_concordance("eq13", 6);
  const std::string csv = concordance_csv(rep);
  REQUIRE(csv.rfind("formula_id,b_index,n8,formula_value,oracle_value,abs_diff,ratio\n",
                    0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == rep.grid_size + 1);

  const std::vector<SweepRow> rows = {{0.0, 0.1, 0.2, PurityVerdict::Mixed}};
  REQUIRE(sweep_csv(rows) ==
          "param,q_max,linear_entropy,verdict\n0,0.10000000000000001,0.20000000000000001,"
          "Mixed\n");
}

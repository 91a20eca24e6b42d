#pragma once

#include <array>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gur/detection.hpp"
#include "gur/states.hpp"
#include "gur/uncertainty.hpp"

namespace gur {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline double get_number(const json& j, const char* field, const char* ctx) {
  if (!j.contains(field) || !j[field].is_number())
    throw std::invalid_argument(std::string(ctx) + ": missing or non-numeric field '" +
                                field + "'");
  return j[field].get<double>();
}

inline std::vector<double> get_vector(const json& j, const char* field, const char* ctx,
                                      std::size_t size) {
  if (!j.contains(field) || !j[field].is_array())
    throw std::invalid_argument(std::string(ctx) + ": missing array field '" + field + "'");
  std::vector<double> out;
  for (const auto& v : j[field]) {
    if (!v.is_number())
      throw std::invalid_argument(std::string(ctx) + ": non-numeric entry in '" + field + "'");
    out.push_back(v.get<double>());
  }
  if (size != 0 && out.size() != size)
    throw std::invalid_argument(std::string(ctx) + ": field '" + field + "' must have " +
                                std::to_string(size) + " entries, got " +
                                std::to_string(out.size()));
  return out;
}

inline Mat parse_complex_matrix(const json& j, const char* ctx) {
  if (!j.contains("re") || !j["re"].is_array())
    throw std::invalid_argument(std::string(ctx) + ": missing matrix field 're'");
  const auto& re = j["re"];
  const int d = int(re.size());
  if (d == 0) throw std::invalid_argument(std::string(ctx) + ": empty matrix");
  const bool has_im = j.contains("im");
  Mat m(d, d);
  for (int r = 0; r < d; ++r) {
    if (!re[r].is_array() || int(re[r].size()) != d)
      throw std::invalid_argument(std::string(ctx) + ": 're' must be a square array");
    for (int c = 0; c < d; ++c) {
      double imv = 0.0;
      if (has_im) {
        if (!j["im"].is_array() || int(j["im"].size()) != d || !j["im"][r].is_array() ||
            int(j["im"][r].size()) != d)
          throw std::invalid_argument(std::string(ctx) + ": 'im' must match 're' in shape");
        imv = j["im"][r][c].get<double>();
      }
      m(r, c) = Cplx(re[r][c].get<double>(), imv);
    }
  }
  return m;
}

}  // namespace detail

/// State schema:
///   {"kind":"bloch","dim":2|3,"n":[...]}
///   {"kind":"density","dim":D,"re":[[..]],"im":[[..]]}
///   {"kind":"family","name":...,"params":{...}}
inline DensityMatrix parse_state(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("state: missing field 'kind'");
  const std::string kind = j["kind"].get<std::string>();

  if (kind == "bloch") {
    const int dim = int(detail::get_number(j, "dim", "state(bloch)"));
    if (dim == 2) {
      const auto n = detail::get_vector(j, "n", "state(bloch)", 3);
      return qubit_density(Vec3(n[0], n[1], n[2]));
    }
    if (dim == 3) {
      const auto n = detail::get_vector(j, "n", "state(bloch)", 8);
      Vec8 v;
      for (int i = 0; i < 8; ++i) v(i) = n[i];
      return qutrit_density(v);
    }
    throw std::invalid_argument("state(bloch): 'dim' must be 2 or 3");
  }

  if (kind == "density") {
    const int dim = int(detail::get_number(j, "dim", "state(density)"));
    const Mat m = detail::parse_complex_matrix(j, "state(density)");
    if (int(m.rows()) != dim)
      throw std::invalid_argument("state(density): 'dim' disagrees with matrix shape");
    return DensityMatrix(m);
  }

  if (kind == "family") {
    if (!j.contains("name") || !j["name"].is_string())
      throw std::invalid_argument("state(family): missing field 'name'");
    const std::string name = j["name"].get<std::string>();
    const json params = j.contains("params") ? j["params"] : json::object();
    if (name == "one_param") {
      const int idx = int(detail::get_number(params, "index", "family(one_param)"));
      const double v = detail::get_number(params, "value", "family(one_param)");
      return qutrit_density(one_param_qutrit(idx, v));
    }
    if (name == "two_param") {
      const auto idx = detail::get_vector(params, "indices", "family(two_param)", 2);
      const auto val = detail::get_vector(params, "values", "family(two_param)", 2);
      return qutrit_density(
          two_param_qutrit({int(idx[0]), int(idx[1])}, {val[0], val[1]}));
    }
    if (name == "three_param") {
      const auto idx = detail::get_vector(params, "indices", "family(three_param)", 3);
      const auto val = detail::get_vector(params, "values", "family(three_param)", 3);
      return qutrit_density(three_param_qutrit({int(idx[0]), int(idx[1]), int(idx[2])},
                                               {val[0], val[1], val[2]}));
    }
    if (name == "schmidt") {
      const auto k = detail::get_vector(params, "k", "family(schmidt)", 0);
      return schmidt_pure(std::span<const double>(k.data(), k.size()));
    }
    if (name == "mixture") {
      const double p = detail::get_number(params, "p", "family(mixture)");
      const auto k1 = detail::get_vector(params, "k1", "family(mixture)", 3);
      const auto k2 = detail::get_vector(params, "k2", "family(mixture)", 3);
      return mixture(p, {k1[0], k1[1], k1[2]}, {k2[0], k2[1], k2[2]});
    }
    if (name == "isotropic")
      return isotropic(detail::get_number(params, "p", "family(isotropic)"));
    if (name == "werner_qubit")
      return werner_qubit(detail::get_number(params, "p", "family(werner_qubit)"));
    throw std::invalid_argument("state(family): unknown family '" + name + "'");
  }

  throw std::invalid_argument("state: unknown kind '" + kind + "'");
}

/// Observable spec: "lambdaN" (qutrit), "sigmax|sigmay|sigmaz" (qubit),
/// "spinx|spiny|spinz" (qutrit spin-1), or inline JSON — either
/// {"dir":[...]} (n.sigma / n.lambda by dimension) or {"re":[[..]],"im":[[..]]}.
inline Mat parse_observable(const std::string& spec, int dim) {
  auto check_dim = [&](int need, const std::string& what) {
    if (dim != need)
      throw std::invalid_argument("observable '" + what + "' needs a dim-" +
                                  std::to_string(need) + " state, got dim " +
                                  std::to_string(dim));
  };
  if (spec.rfind("lambda", 0) == 0 && spec.size() == 7 && spec[6] >= '1' && spec[6] <= '8') {
    check_dim(3, spec);
    return gellmann(spec[6] - '0');
  }
  if (spec == "sigmax" || spec == "sigmay" || spec == "sigmaz") {
    check_dim(2, spec);
    return pauli(spec == "sigmax" ? Axis::X : spec == "sigmay" ? Axis::Y : Axis::Z);
  }
  if (spec == "spinx" || spec == "spiny" || spec == "spinz") {
    check_dim(3, spec);
    return spin1(spec == "spinx" ? Axis::X : spec == "spiny" ? Axis::Y : Axis::Z);
  }
  json j;
  try {
    j = json::parse(spec);
  } catch (const json::exception&) {
    throw std::invalid_argument("observable: unrecognized spec '" + spec + "'");
  }
  if (j.contains("dir")) {
    const auto dir = detail::get_vector(j, "dir", "observable", 0);
    if (dim == 2 && dir.size() == 3) {
      Mat out = Mat::Zero(2, 2);
      for (int i = 0; i < 3; ++i) out += dir[i] * pauli(i + 1);
      return out;
    }
    if (dim == 3 && dir.size() == 8) {
      Mat out = Mat::Zero(3, 3);
      for (int i = 0; i < 8; ++i) out += dir[i] * gellmann(i + 1);
      return out;
    }
    throw std::invalid_argument("observable: 'dir' length must match the state dimension");
  }
  const Mat m = detail::parse_complex_matrix(j, "observable");
  if (int(m.rows()) != dim)
    throw std::invalid_argument("observable: matrix dimension disagrees with the state");
  require_hermitian(m, "observable");
  return m;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline json to_json(const QReport& r) {
  return json{{"var_a", r.var_a},
              {"var_b", r.var_b},
              {"commutator_term", r.commutator_term},
              {"anticommutator_term", r.anticommutator_term},
              {"q", r.q}};
}

inline json to_json(const SchemeTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back(json{{"a", s.a_index}, {"b", s.b_index}, {"q", s.q}, {"below", s.below}});
  json per_step = json::array();
  for (const auto& v : t.budget.per_step_new) per_step.push_back(v);
  return json{{"verdict", to_string(t.verdict)},
              {"epsilon", t.epsilon},
              {"steps", steps},
              {"budget", json{{"per_step", per_step}, {"total", t.budget.cumulative_total}}}};
}

inline json to_json(const ConcordanceReport& r) {
  return json{{"formula_id", r.formula_id},
              {"param_names", r.param_names},
              {"oracle", r.oracle_description},
              {"grid_size", r.grid_size},
              {"max_abs_diff", r.max_abs_diff},
              {"fitted_ratio", r.fitted_ratio},
              {"ratio_spread", r.ratio_spread},
              {"verdict", to_string(r.verdict)}};
}

inline json to_json(const TwoQutritClassification& c) {
  json used = json::array();
  for (const auto& [a, b] : c.expectations_used) used.push_back(json::array({a, b}));
  return json{{"verdict", to_string(c.verdict)},
              {"epsilon", c.epsilon},
              {"q_max", c.q_max},
              {"argmax",
               json{{"i", c.argmax.i},
                    {"j", c.argmax.j},
                    {"theta2", c.argmax.theta2},
                    {"theta3", c.argmax.theta3},
                    {"theta4", c.argmax.theta4}}},
              {"expectations_used", used}};
}

inline json to_json(const BlindSpotResult& b) {
  json out{{"family", b.family},
           {"epsilon", b.epsilon},
           {"threshold", b.threshold},
           {"full_range", b.full_range},
           {"interval", json::array({b.interval_lo, b.interval_hi})}};
  if (std::isnan(b.paper_threshold))
    out["paper_threshold"] = nullptr;
  else
    out["paper_threshold"] = b.paper_threshold;
  return out;
}

// ---------------------------------------------------------------------------
// CSV ('.' decimal, 17 significant digits)
// ---------------------------------------------------------------------------

inline std::string csv_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string concordance_csv(const ConcordanceReport& r) {
  std::string out = "formula_id";
  for (const auto& name : r.param_names) out += "," + name;
  out += ",formula_value,oracle_value,abs_diff,ratio\n";
  for (const auto& row : r.rows) {
    out += r.formula_id;
    for (double p : row.params) out += "," + csv_double(p);
    const double diff = std::abs(row.formula_value - row.oracle_value);
    out += "," + csv_double(row.formula_value) + "," + csv_double(row.oracle_value) + "," +
           csv_double(diff);
    if (std::abs(row.formula_value) > 1e-8)
      out += "," + csv_double(row.oracle_value / row.formula_value);
    else
      out += ",nan";
    out += "\n";
  }
  return out;
}

struct SweepRow {
  double param = 0.0;
  double q_max = 0.0;
  double linear_entropy = 0.0;
  PurityVerdict verdict = PurityVerdict::Mixed;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,q_max,linear_entropy,verdict\n";
  for (const auto& r : rows)
    out += csv_double(r.param) + "," + csv_double(r.q_max) + "," +
           csv_double(r.linear_entropy) + "," + to_string(r.verdict) + "\n";
  return out;
}

}  // namespace gur

// Command-line surface: evaluate Q, run the detection schemes, emit
// concordance and budget reports, sweep families to CSV, and audit the
// random-state invariants.
//
// Exit codes: 0 success, 1 audit property failure, 2 invalid input,
// 3 positivity violation, 4 numerical failure.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gur/gur.hpp"

namespace {

using namespace gur;
namespace fs = std::filesystem;

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  f << payload;
}

json load_state_json(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] != '{') {
    std::ifstream f(arg);
    if (!f) throw std::invalid_argument("cannot open state file '" + arg + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state is not valid JSON: ") + e.what());
  }
}

std::array<double, 3> parse_k3(const std::string& arg, const char* what) {
  json j;
  try {
    j = json::parse(arg);
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string(what) + " must be a JSON array of 3 numbers");
  }
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    throw std::invalid_argument(std::string(what) + " must be a JSON array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

int cmd_eval_q(const std::string& state_arg, const std::string& a_arg,
               const std::string& b_arg, const std::string& out_path) {
  const DensityMatrix rho = parse_state(load_state_json(state_arg));
  const Mat a = parse_observable(a_arg, rho.dim());
  const Mat b = parse_observable(b_arg, rho.dim());
  emit(to_json(q_oracle(rho, a, b)).dump(2) + "\n", out_path);
  return 0;
}

int cmd_scheme(const std::string& state_arg, double epsilon, bool strict_pairs,
               const std::string& out_path) {
  const DensityMatrix rho = parse_state(load_state_json(state_arg));
  if (rho.dim() != 3)
    throw std::invalid_argument("scheme requires a single-qutrit state (dim 3), got dim " +
                                std::to_string(rho.dim()));
  SchemeConfig cfg;
  cfg.epsilon = epsilon;
  cfg.strict_pairs = strict_pairs;
  emit(to_json(run_qutrit_scheme(rho, cfg)).dump(2) + "\n", out_path);
  return 0;
}

int cmd_concordance(const std::string& id, int grid, const std::string& out_dir) {
  const auto known = formula_ids();
  std::vector<std::string> ids;
  if (id == "all") {
    ids = known;
  } else {
    if (std::find(known.begin(), known.end(), id) == known.end())
      throw std::invalid_argument("unknown formula id '" + id + "'");
    ids = {id};
  }
  fs::create_directories(out_dir);
  std::ostringstream table;
  table << "formula_id,verdict,fitted_ratio,ratio_spread,max_abs_diff,grid_rows\n";
  for (const auto& fid : ids) {
    const ConcordanceReport rep = run_concordance(fid, grid);
    {
      std::ofstream f(fs::path(out_dir) / (fid + ".json"), std::ios::binary);
      f << to_json(rep).dump(2) << "\n";
    }
    {
      std::ofstream f(fs::path(out_dir) / (fid + ".csv"), std::ios::binary);
      f << concordance_csv(rep);
    }
    table << fid << "," << to_string(rep.verdict) << "," << csv_double(rep.fitted_ratio)
          << "," << csv_double(rep.ratio_spread) << "," << csv_double(rep.max_abs_diff)
          << "," << rep.grid_size << "\n";
  }
  std::cout << table.str();
  return 0;
}

int cmd_budget(const std::string& format, const std::string& out_path) {
  const auto rows = budget_table();
  if (format == "json") {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back(json{{"system", r.system},
                         {"tomography", r.tomography},
                         {"gur_printed", r.gur_printed},
                         {"gur_computed", r.gur_computed},
                         {"counting", r.counting}});
    emit(out.dump(2) + "\n", out_path);
    return 0;
  }
  if (format != "text") throw std::invalid_argument("budget --format must be text or json");
  std::ostringstream os;
  os << "system          tomography  scheme(printed)  scheme(computed)\n";
  for (const auto& r : rows) {
    os << r.system;
    for (std::size_t i = r.system.size(); i < 16; ++i) os << ' ';
    std::string tomo = std::to_string(r.tomography);
    os << tomo;
    for (std::size_t i = tomo.size(); i < 12; ++i) os << ' ';
    os << r.gur_printed;
    for (std::size_t i = r.gur_printed.size(); i < 17; ++i) os << ' ';
    os << r.gur_computed << "\n";
  }
  emit(os.str(), out_path);
  return 0;
}

int cmd_sweep(const std::string& family, int index, const std::string& k1_arg,
              const std::string& k2_arg, double from, double to, double step, double epsilon,
              int grid, const std::string& out_path) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep: --step must be > 0");
  if (to < from) throw std::invalid_argument("sweep: --to must be >= --from");

  std::vector<double> params;
  const int count = int(std::floor((to - from) / step + 1e-6)) + 1;
  for (int i = 0; i < count; ++i)
    params.push_back(std::min(from + i * step, to));

  std::vector<SweepRow> rows;
  const SchemeConfig scheme_cfg{epsilon};

  try {
    for (double p : params) {
      SweepRow row;
      row.param = p;
      if (family == "one_param") {
        if (index < 1 || index > 8)
          throw std::invalid_argument("sweep one_param: --index must be in 1..8");
        const DensityMatrix rho = qutrit_density(one_param_qutrit(index, p));
        row.q_max = scheme_decision_q(rho, scheme_cfg);
        row.linear_entropy = linear_entropy(rho);
        row.verdict = run_qutrit_scheme(rho, scheme_cfg).verdict;
      } else if (family == "isotropic") {
        const DensityMatrix rho = isotropic(p);
        const auto cls = classify_two_qutrit(rho, epsilon, grid);
        row.q_max = cls.q_max;
        row.linear_entropy = linear_entropy(rho);
        row.verdict = cls.verdict;
      } else if (family == "mixture") {
        const auto k1 = parse_k3(k1_arg, "--k1");
        const auto k2 = parse_k3(k2_arg, "--k2");
        const DensityMatrix rho = mixture(p, k1, k2);
        const auto cls = classify_two_qutrit(rho, epsilon, grid);
        row.q_max = cls.q_max;
        row.linear_entropy = linear_entropy(rho);
        row.verdict = cls.verdict;
      } else if (family == "werner_qubit") {
        const DensityMatrix rho = werner_qubit(p);
        const auto max = q_max_over_settings(rho, planar_two_qubit_family(), grid, 2);
        row.q_max = max.q_max;
        row.linear_entropy = linear_entropy(rho);
        row.verdict = max.q_max >= epsilon ? PurityVerdict::Mixed : PurityVerdict::Pure;
      } else {
        throw std::invalid_argument("sweep: unknown family '" + family +
                                    "' (one_param|isotropic|mixture|werner_qubit)");
      }
      rows.push_back(row);
    }
  } catch (const PositivityError& e) {
    // The op contract maps a range leaving the state space to invalid input.
    throw std::invalid_argument(std::string("sweep range leaves the state space: ") +
                                e.what());
  }
  emit(sweep_csv(rows), out_path);
  return 0;
}

int cmd_audit(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("audit: --count must be >= 1");
  const std::array<int, 4> dims = {2, 3, 4, 9};
  int fail_nonneg = 0, fail_roundtrip = 0, fail_covariance = 0;

  {
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
      const int dim = dims[i % 4];
      const DensityMatrix rho = random_density(dim, seed * 1000003ULL + i);
      const Mat a = rng.random_hermitian(dim);
      const Mat b = rng.random_hermitian(dim);
      if (q_oracle(rho, a, b).q < -1e-10) ++fail_nonneg;
    }
  }
  for (int i = 0; i < count; ++i) {
    const int dim = (i % 2) ? 3 : 2;
    const DensityMatrix rho = random_density(dim, seed * 7919ULL + i);
    const Eigen::VectorXd n = bloch_of(rho);
    DensityMatrix rebuilt = dim == 2 ? qubit_density(Vec3(n(0), n(1), n(2))) : [&] {
      Vec8 v;
      for (int k = 0; k < 8; ++k) v(k) = n(k);
      return qutrit_density(v);
    }();
    if ((rebuilt.matrix() - rho.matrix()).cwiseAbs().maxCoeff() > 1e-10) ++fail_roundtrip;
  }
  {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int i = 0; i < count; ++i) {
      const DensityMatrix rho = random_density(3, seed * 104729ULL + i);
      const Mat a = rng.random_hermitian(3);
      const Mat b = rng.random_hermitian(3);
      const Mat u = rng.random_unitary(3);
      const double q0 = q_oracle(rho, a, b).q;
      const DensityMatrix rho2(unitary_conjugate(rho.matrix(), u));
      const double q1 =
          q_oracle(rho2, unitary_conjugate(a, u), unitary_conjugate(b, u)).q;
      if (std::abs(q0 - q1) > 1e-10 * std::max(1.0, std::abs(q0))) ++fail_covariance;
    }
  }

  std::cout << "gur non-negativity:  " << (count - fail_nonneg) << "/" << count << " pass\n";
  std::cout << "bloch round trip:    " << (count - fail_roundtrip) << "/" << count
            << " pass\n";
  std::cout << "unitary covariance:  " << (count - fail_covariance) << "/" << count
            << " pass\n";
  return (fail_nonneg + fail_roundtrip + fail_covariance) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixedness detection for qubit and qutrit states via the "
               "Robertson-Schrodinger uncertainty relation"};
  app.require_subcommand(1);

  std::string state_arg, a_arg, b_arg, out_path;
  std::string concordance_id = "all", budget_format = "text", family;
  std::string k1_arg = "[1,0,0]", k2_arg = "[0,1,0]";
  double epsilon = 1e-7, from = 0.0, to = 1.0, step = 0.05;
  int grid = 24, index = 8, count = 1000;
  std::uint64_t seed = 1;
  bool strict_pairs = false;

  auto* eval = app.add_subcommand("eval-q", "Evaluate Q(A, B, rho) with its breakdown");
  eval->add_option("--state", state_arg, "State JSON (inline or file path)")->required();
  eval->add_option("--a", a_arg, "Observable A")->required();
  eval->add_option("--b", b_arg, "Observable B")->required();
  eval->add_option("--out", out_path, "Write payload to file");

  auto* scheme = app.add_subcommand("scheme", "Run the sequential single-qutrit purity test");
  scheme->add_option("--state", state_arg, "State JSON (inline or file path)")->required();
  scheme->add_option("--epsilon", epsilon, "Uncertainty threshold");
  scheme->add_flag("--strict-pairs", strict_pairs,
                   "Declare Mixed at the first split pair instead of advancing");
  scheme->add_option("--out", out_path, "Write payload to file");

  auto* conc = app.add_subcommand("concordance",
                                  "Compare printed closed forms against the matrix oracle");
  conc->add_option("id", concordance_id, "Formula id or 'all'");
  conc->add_option("--grid", grid, "Grid density per axis");
  conc->add_option("--out", out_path, "Output directory (default concordance_out)");

  auto* budget = app.add_subcommand("budget", "Measurement-count comparison table");
  budget->add_option("--format", budget_format, "text or json");
  budget->add_option("--out", out_path, "Write payload to file");

  auto* sweep = app.add_subcommand("sweep", "Sweep a family to CSV");
  sweep->add_option("--family", family, "one_param|isotropic|mixture|werner_qubit")
      ->required();
  sweep->add_option("--index", index, "Bloch index for one_param");
  sweep->add_option("--k1", k1_arg, "Mixture component 1 (JSON array of 3)");
  sweep->add_option("--k2", k2_arg, "Mixture component 2 (JSON array of 3)");
  sweep->add_option("--from", from, "Range start")->required();
  sweep->add_option("--to", to, "Range end")->required();
  sweep->add_option("--step", step, "Range step")->required();
  sweep->add_option("--epsilon", epsilon, "Verdict threshold");
  sweep->add_option("--grid", grid, "Maximizer grid");
  sweep->add_option("--out", out_path, "Write CSV to file");

  auto* audit = app.add_subcommand("audit", "Run the random-state invariant suite");
  audit->add_option("--count", count, "Iterations per property");
  audit->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (eval->parsed()) return cmd_eval_q(state_arg, a_arg, b_arg, out_path);
    if (scheme->parsed()) return cmd_scheme(state_arg, epsilon, strict_pairs, out_path);
    if (conc->parsed())
      return cmd_concordance(concordance_id, grid,
                             out_path.empty() ? "concordance_out" : out_path);
    if (budget->parsed()) return cmd_budget(budget_format, out_path);
    if (sweep->parsed())
      return cmd_sweep(family, index, k1_arg, k2_arg, from, to, step, epsilon, grid,
                       out_path);
    if (audit->parsed()) return cmd_audit(count, seed);
  } catch (const PositivityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

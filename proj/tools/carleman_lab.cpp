#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "clab/diagnostics.hpp"
#include "clab/identity_suite.hpp"
#include "clab/inverse.hpp"
#include "clab/parallel.hpp"
#include "clab/problem_config.hpp"
#include "clab/scan.hpp"
#include "clab/solution_io.hpp"
#include "clab/weights.hpp"

using namespace clab;

namespace {

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParameterError(std::string("bad number in ") + what + ": '" + tok + "'");
    }
  }
  if (out.empty()) throw ParameterError(std::string(what) + " is empty");
  return out;
}

// "a:b:step" -> a, a + step, ..., b
std::vector<double> parse_step_grid(const std::string& text) {
  std::vector<double> p;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) p.push_back(parse_list(tok, "--grid").at(0));
  if (p.size() != 3 || !(p[2] > 0.0) || p[1] < p[0]) throw ParameterError("--grid expects a:b:step with a <= b, step > 0");
  const auto n = static_cast<long>(std::floor((p[1] - p[0]) / p[2] + 1e-9));
  if (n > 10000000) throw ParameterError("--grid has too many points");
  std::vector<double> g;
  for (long i = 0; i <= n; ++i) g.push_back(p[0] + static_cast<double>(i) * p[2]);
  return g;
}

PiecewiseCoefficient parse_gamma(const std::string& text) {
  const auto v = parse_list(text, "--gamma");
  if (v.size() == 1) return PiecewiseCoefficient::constant(v[0], v[0]);
  if (v.size() == 2) return PiecewiseCoefficient::constant(v[0], v[1]);
  throw ParameterError("--gamma expects 'c' or 'plus,minus'");
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text << std::flush;
  else
    write_file_atomic(out, text);
}

int fail(int code, const char* category, const char* kind, const std::string& msg) {
  std::cerr << "carleman-lab: " << msg << "\n"
            << nlohmann::json{{"error", {{"category", category}, {"kind", kind}, {"message", msg}, {"exit_code", code}}}}
                   .dump()
            << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for Carleman estimates and doubling inequalities in elliptic transmission problems"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: all cores; CLAB_THREADS overrides)");

  // psi-table
  auto* psi_cmd = app.add_subcommand("psi-table", "CSV table of the weight profile psi, psi' and phi");
  double psi_eps = 0.5;
  std::string psi_grid = "0:1:0.1", psi_out;
  psi_cmd->add_option("--eps", psi_eps, "Weight exponent in (0, 1]")->capture_default_str();
  psi_cmd->add_option("--grid", psi_grid, "Grid a:b:step of s values in [0, 1]")->capture_default_str();
  psi_cmd->add_option("--out", psi_out, "Output CSV (default: stdout)");

  // verify-identities
  auto* id_cmd = app.add_subcommand("verify-identities", "Check the operator identities at random configurations");
  std::string id_metric = "identity", id_out;
  double id_eps = 0.5;
  std::size_t id_samples = 1000;
  std::uint64_t id_seed = 1;
  int id_dim = 2;
  id_cmd->add_option("--metric", id_metric, "Metric id: identity, paraboloid or paraboloid(c)")->capture_default_str();
  id_cmd->add_option("--dim", id_dim, "Dimension (2 or 3)")->capture_default_str();
  id_cmd->add_option("--eps", id_eps, "Weight exponent in (0, 1]")->capture_default_str();
  id_cmd->add_option("--samples", id_samples, "Number of random configurations")->capture_default_str();
  id_cmd->add_option("--seed", id_seed, "Random seed")->capture_default_str();
  id_cmd->add_option("--out", id_out, "Output JSON (default: stdout)");

  // carleman-scan
  auto* scan_cmd = app.add_subcommand("carleman-scan", "Both sides of a Carleman estimate over a tau grid");
  std::string sc_est = "thm21", sc_metric = "identity", sc_gamma = "1,2", sc_grid = "10:10000:13", sc_family = "bump:6",
              sc_support, sc_out, sc_summary;
  double sc_eps = 0.5;
  std::uint64_t sc_seed = 1;
  int sc_dim = 2;
  scan_cmd->add_option("--estimate", sc_est, "thm21, prop35, prop42 or lem41")
      ->check(CLI::IsMember({"thm21", "prop35", "prop42", "lem41"}))
      ->capture_default_str();
  scan_cmd->add_option("--metric", sc_metric, "Metric id")->capture_default_str();
  scan_cmd->add_option("--dim", sc_dim, "Dimension (2 or 3)")->capture_default_str();
  scan_cmd->add_option("--gamma", sc_gamma, "Coefficient 'plus,minus' (constants)")->capture_default_str();
  scan_cmd->add_option("--eps", sc_eps, "Weight exponent in (0, 1]")->capture_default_str();
  scan_cmd->add_option("--tau-grid", sc_grid, "Log grid a:b:n")->capture_default_str();
  scan_cmd->add_option("--family", sc_family, "Test family name[:count]: bump, radial, transmission")
      ->capture_default_str();
  scan_cmd->add_option("--support", sc_support,
                       "ball, half-ball or annulus (default: annulus for prop42/lem41, ball otherwise)")
      ->check(CLI::IsMember({"ball", "half-ball", "annulus"}));
  scan_cmd->add_option("--seed", sc_seed, "Family seed")->capture_default_str();
  scan_cmd->add_option("--out", sc_out, "Output CSV (default: stdout)");
  scan_cmd->add_option("--summary", sc_summary, "JSON summary file (default: stdout when --out is a file)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Finite element solve of a transmission problem");
  std::string so_config, so_out;
  solve_cmd->add_option("--config", so_config, "problem.json (see docs/problem.schema.json)")->required();
  solve_cmd->add_option("--out", so_out, "Output solution file (CLAB1 binary)")->required();

  // doubling
  auto* dbl_cmd = app.add_subcommand("doubling", "Mass ratios, frequency and doubling constant of a solution");
  std::string db_solution, db_radii, db_out;
  double db_rbar1 = 0.0;
  dbl_cmd->add_option("--solution", db_solution, "Solution file written by solve")->required();
  dbl_cmd->add_option("--radii", db_radii, "Comma separated radii in (0, rbar1/16)")->required();
  dbl_cmd->add_option("--rbar1", db_rbar1, "Outer radius rbar1 in (0, 1]")->required();
  dbl_cmd->add_option("--out", db_out, "Output CSV (default: stdout)");

  // inverse-demo
  auto* inv_cmd = app.add_subcommand("inverse-demo", "Energy gap of a concentric disk inclusion");
  inv_cmd->set_help_flag("--help", "Print this help message and exit");
  double iv_rho = 0.2, iv_k = 2.0, iv_h = 1.0 / 64.0;
  std::string iv_out;
  inv_cmd->add_option("--rho", iv_rho, "Inclusion radius in (0, 1)")->capture_default_str();
  inv_cmd->add_option("--k", iv_k, "Contrast k > 0, k != 1")->capture_default_str();
  inv_cmd->add_option("--h", iv_h, "Mesh size")->capture_default_str();
  inv_cmd->add_option("--out", iv_out, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, "validation", "usage", e.what());
  }

  try {
    const unsigned nthreads = resolve_threads(threads);

    if (*psi_cmd) {
      WeightParams p(psi_eps);
      std::string csv = "s,psi,psi_prime,phi\n";
      for (double s : parse_step_grid(psi_grid)) {
        if (s < 0.0 || s > 1.0) throw DomainError("psi-table grid must lie in [0, 1]");
        // s = 0: psi(0) = 0, psi'(0) = 1, phi(0) = 1
        const double v = s > 0.0 ? psi(s, p.eps) : 0.0, d = s > 0.0 ? psi_prime(s, p.eps) : 1.0;
        csv += fmt(s) + "," + fmt(v) + "," + fmt(d) + "," + fmt(phi(s, p.eps)) + "\n";
      }
      emit(psi_out, csv);
    } else if (*id_cmd) {
      if (id_samples == 0) throw ParameterError("--samples must be positive");
      const auto m = metric_from_id(id_metric, id_dim);
      const auto r = run_identity_suite(m, WeightParams(id_eps).eps, id_samples, id_seed, nthreads);
      emit(id_out, to_json(r).dump(2) + "\n");
      if (!r.pass()) return fail(3, "numerical", "identity", "identity residuals exceed the tolerance");
    } else if (*scan_cmd) {
      ScanConfig cfg;
      cfg.estimate = estimate_from_string(sc_est);
      cfg.metric = metric_from_id(sc_metric, sc_dim);
      cfg.gamma = parse_gamma(sc_gamma);
      cfg.eps = WeightParams(sc_eps);
      cfg.taus = parse_tau_grid(sc_grid);
      FamilySpec fs = parse_family(sc_family);
      fs.seed = sc_seed;
      const bool annulus_needed = cfg.estimate == Estimate::Prop42 || cfg.estimate == Estimate::Lem41;
      if (sc_support.empty()) sc_support = annulus_needed ? "annulus" : "ball";
      fs.kind = sc_support == "annulus"     ? SupportKind::Annulus
                : sc_support == "half-ball" ? SupportKind::PuncturedHalfBall
                                            : SupportKind::PuncturedBall;
      cfg.family = make_family(sc_dim, fs, cfg.gamma);
      cfg.metric_id = sc_metric;
      cfg.gamma_id = sc_gamma;
      cfg.family_id = sc_family;
      cfg.seed = sc_seed;
      cfg.threads = nthreads;
      const ScanResult r = tau_scan(cfg);
      std::ostringstream csv;
      write_csv(r, csv);
      emit(sc_out, csv.str());
      const std::string summary = summary_json(r).dump(2) + "\n";
      if (!sc_summary.empty())
        write_file_atomic(sc_summary, summary);
      else if (!sc_out.empty() && sc_out != "-")
        std::cout << summary;
    } else if (*solve_cmd) {
      const ProblemConfig cfg = load_problem_config(so_config);
      const auto [problem, mesh] = cfg.instantiate();
      const SolutionField u = solve(problem, mesh, nthreads);
      write_solution(so_out, u);
      nlohmann::json j{{"nodes", mesh.num_nodes()},     {"cells", mesh.num_cells()},
                       {"unknowns", u.stats.unknowns},   {"residual", u.stats.residual},
                       {"method", u.stats.method},       {"max_edge", mesh.max_edge()},
                       {"boundary", problem.bc.name},    {"out", so_out}};
      if (problem.bc.kind == BoundaryCondition::Kind::Dirichlet) j["l2_error_vs_data"] = l2_error(u, problem.bc.data);
      if (problem.inclusion) j["inclusion_cells"] = std::count(problem.inclusion->mask.begin(), problem.inclusion->mask.end(), 1);
      std::cout << j.dump(2) << "\n";
    } else if (*dbl_cmd) {
      const SolutionField u = read_solution(db_solution);
      const auto radii = parse_list(db_radii, "--radii");
      const DoublingReport d = doubling_report(u, radii, db_rbar1);
      std::string csv = "r,mass,mass_2r,ratio\n";
      for (std::size_t i = 0; i < radii.size(); ++i)
        csv += fmt(radii[i]) + "," + fmt(d.mass[i]) + "," + fmt(d.mass[i] * d.ratio[i]) + "," + fmt(d.ratio[i]) + "\n";
      emit(db_out, csv);
      if (!db_out.empty() && db_out != "-") std::cout << to_json(d).dump(2) << "\n";
    } else if (*inv_cmd) {
      const EnergyReport r = disk_inclusion_demo(iv_rho, iv_k, iv_h, nthreads);
      nlohmann::json j = to_json(r);
      j["rho"] = iv_rho;
      j["k"] = iv_k;
      j["h"] = iv_h;
      j["closed_form_gap"] = disk_gap_closed_form(iv_rho, iv_k);
      emit(iv_out, j.dump(2) + "\n");
    }
  } catch (const ValidationFailure& e) {
    return fail(2, e.category(), e.kind(), e.what());
  } catch (const NumericalFailure& e) {
    return fail(3, e.category(), e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail(3, "numerical", "internal", e.what());
  }
  return 0;
}

// Command-line front end: meshes, single solves, parameter sweeps, spectral
// verification and system dumps, with CSV/JSON output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sdhdg/condense.hpp"
#include "sdhdg/experiment.hpp"
#include "sdhdg/spectral.hpp"

using nlohmann::json;

namespace {

sdhdg::CaseKind parse_case(const std::string& s) {
  return s == "heterogeneous" ? sdhdg::CaseKind::Heterogeneous
                              : sdhdg::CaseKind::Manufactured;
}
sdhdg::SolverKind parse_solver(const std::string& s) {
  return s == "gmres" ? sdhdg::SolverKind::Gmres : sdhdg::SolverKind::Minres;
}
sdhdg::PrecondVariant parse_precond(const std::string& s) {
  return s == "P" ? sdhdg::PrecondVariant::P : sdhdg::PrecondVariant::Phat;
}
sdhdg::PrecondMode parse_mode(const std::string& s) {
  return s == "inexact" ? sdhdg::PrecondMode::Inexact : sdhdg::PrecondMode::Exact;
}

// Flat description of a (possibly one-cell) sweep; lists expand to a cross
// product in the declared order.
struct SweepSpec {
  std::string kind = "manufactured";
  std::vector<int> n{8};
  std::vector<int> k{2};
  std::vector<double> mu{1.0};
  std::vector<double> kappa{1.0};
  std::vector<double> alpha{1.0};
  std::vector<std::string> solver{"minres"};
  std::vector<std::string> precond{"Phat"};
  std::string mode = "exact";
  int sweeps = 5;
  double tol = 1e-8;
  int maxit = 2000;
  int restart = 0;
  double perturb = 0.0;
  unsigned seed = 0;
};

template <typename T>
void read_scalar_or_list(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  if (j[key].is_array())
    out = j[key].get<std::vector<T>>();
  else
    out = {j[key].get<T>()};
}

void load_config(const std::string& path, SweepSpec& spec) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j = json::parse(in);
  if (j.contains("case")) spec.kind = j["case"].get<std::string>();
  read_scalar_or_list(j, "n", spec.n);
  read_scalar_or_list(j, "k", spec.k);
  read_scalar_or_list(j, "mu", spec.mu);
  read_scalar_or_list(j, "kappa", spec.kappa);
  read_scalar_or_list(j, "alpha", spec.alpha);
  read_scalar_or_list(j, "solver", spec.solver);
  read_scalar_or_list(j, "precond", spec.precond);
  if (j.contains("mode")) spec.mode = j["mode"].get<std::string>();
  if (j.contains("sweeps")) spec.sweeps = j["sweeps"].get<int>();
  if (j.contains("tol")) spec.tol = j["tol"].get<double>();
  if (j.contains("maxit")) spec.maxit = j["maxit"].get<int>();
  if (j.contains("restart")) spec.restart = j["restart"].get<int>();
  if (j.contains("perturb")) spec.perturb = j["perturb"].get<double>();
  if (j.contains("seed")) spec.seed = j["seed"].get<unsigned>();
}

std::vector<sdhdg::ExperimentConfig> expand(const SweepSpec& spec) {
  std::vector<sdhdg::ExperimentConfig> cells;
  for (int n : spec.n)
    for (int k : spec.k)
      for (double mu : spec.mu)
        for (double kappa : spec.kappa)
          for (double alpha : spec.alpha)
            for (const auto& sol : spec.solver)
              for (const auto& pre : spec.precond) {
                sdhdg::ExperimentConfig c;
                c.kind = parse_case(spec.kind);
                c.n = n;
                c.k = k;
                c.mu = mu;
                c.kappa = kappa;
                c.alpha = alpha;
                c.solver = parse_solver(sol);
                c.variant = parse_precond(pre);
                c.mode = parse_mode(spec.mode);
                c.sweeps = spec.sweeps;
                c.tol = spec.tol;
                c.maxit = spec.maxit;
                c.restart = spec.restart;
                c.perturb = spec.perturb;
                c.seed = spec.seed;
                cells.push_back(c);
              }
  return cells;
}

json result_json(const sdhdg::ExperimentResult& r) {
  json j;
  j["case"] = sdhdg::to_string(r.config.kind);
  j["solver"] = sdhdg::to_string(r.config.solver);
  j["precond"] = sdhdg::to_string(r.config.variant);
  j["mode"] = sdhdg::to_string(r.config.mode);
  j["n"] = r.config.n;
  j["k"] = r.config.k;
  j["mu"] = r.config.mu;
  j["kappa"] = r.config.kappa;
  j["alpha"] = r.config.alpha;
  j["iterations"] = r.report.iterations;
  j["converged"] = r.report.converged;
  j["compatibility"] = r.compatibility;
  if (r.errors) {
    j["velocity_error"] = r.errors->velocity_l2;
    j["pressure_error"] = r.errors->pressure_l2;
  }
  return j;
}

int finish(const std::vector<sdhdg::ExperimentResult>& results,
           const std::string& csv_path, const std::string& summary_path,
           bool allow_failures) {
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s %s/%s n=%d k=%d mu=%g kappa=%g alpha=%g iters=%d %s\n",
                sdhdg::to_string(r.config.solver), sdhdg::to_string(r.config.variant),
                sdhdg::to_string(r.config.mode), r.config.n, r.config.k, r.config.mu,
                r.config.kappa, r.config.alpha, r.report.iterations,
                r.report.converged ? "converged" : "FAILED");
    ok = ok && r.report.converged;
  }
  if (!csv_path.empty()) sdhdg::write_results_csv(results, csv_path);
  if (!summary_path.empty()) {
    json j;
    j["all_converged"] = ok;
    j["results"] = json::array();
    for (const auto& r : results) j["results"].push_back(result_json(r));
    std::ofstream out(summary_path);
    out << j.dump(2) << "\n";
  }
  if (!ok && !allow_failures) return 2;
  return 0;
}

void add_spec_options(CLI::App* cmd, SweepSpec& spec, bool lists) {
  cmd->add_option("--case", spec.kind)
      ->check(CLI::IsMember({"manufactured", "heterogeneous"}));
  if (lists) {
    cmd->add_option("--n", spec.n)->delimiter(',');
    cmd->add_option("--k", spec.k)->delimiter(',');
    cmd->add_option("--mu", spec.mu)->delimiter(',');
    cmd->add_option("--kappa", spec.kappa)->delimiter(',');
    cmd->add_option("--alpha", spec.alpha)->delimiter(',');
    cmd->add_option("--solver", spec.solver)->delimiter(',');
    cmd->add_option("--precond", spec.precond)->delimiter(',');
  } else {
    cmd->add_option("--n", spec.n[0]);
    cmd->add_option("--k", spec.k[0]);
    cmd->add_option("--mu", spec.mu[0]);
    cmd->add_option("--kappa", spec.kappa[0]);
    cmd->add_option("--alpha", spec.alpha[0]);
    cmd->add_option("--solver", spec.solver[0])
        ->check(CLI::IsMember({"minres", "gmres"}));
    cmd->add_option("--precond", spec.precond[0])->check(CLI::IsMember({"P", "Phat"}));
  }
  cmd->add_option("--mode", spec.mode)->check(CLI::IsMember({"exact", "inexact"}));
  cmd->add_option("--sweeps", spec.sweeps);
  cmd->add_option("--tol", spec.tol);
  cmd->add_option("--maxit", spec.maxit);
  cmd->add_option("--restart", spec.restart);
  cmd->add_option("--perturb", spec.perturb);
  cmd->add_option("--seed", spec.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled free-flow/porous-medium HDG solver and experiment runner"};
  app.require_subcommand(1);

  // A --config JSON (same keys as the long flags) provides defaults that
  // explicit flags override; it is consumed before CLI parsing.
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];

  SweepSpec spec;
  if (!config_path.empty()) load_config(config_path, spec);

  std::string csv_path, summary_path, history_path, prefix = "system";
  bool allow_failures = false;
  int jobs = 1;
  std::string config_dummy;

  auto* mesh_cmd = app.add_subcommand("mesh", "Build and validate a split-square mesh");
  int mesh_n = 8;
  double mesh_perturb = 0.0;
  unsigned mesh_seed = 0;
  std::string mesh_out;
  mesh_cmd->add_option("--n", mesh_n);
  mesh_cmd->add_option("--perturb", mesh_perturb);
  mesh_cmd->add_option("--seed", mesh_seed);
  mesh_cmd->add_option("--output", mesh_out);

  auto* solve_cmd = app.add_subcommand("solve", "Run a single configuration");
  add_spec_options(solve_cmd, spec, /*lists=*/false);
  solve_cmd->add_option("--config", config_dummy);
  solve_cmd->add_option("--output", csv_path);
  solve_cmd->add_option("--summary", summary_path);
  solve_cmd->add_option("--history", history_path);
  solve_cmd->add_flag("--allow-failures", allow_failures);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a cross-product of configurations");
  add_spec_options(sweep_cmd, spec, /*lists=*/true);
  sweep_cmd->add_option("--config", config_dummy);
  sweep_cmd->add_option("--jobs", jobs);
  sweep_cmd->add_option("--output", csv_path);
  sweep_cmd->add_option("--summary", summary_path);
  sweep_cmd->add_flag("--allow-failures", allow_failures);

  auto* verify_cmd = app.add_subcommand("verify", "Well-posedness constant reports");
  std::string suite = "spectral";
  SweepSpec vspec;
  vspec.n = {2};
  vspec.k = {1};
  vspec.precond = {"P", "Phat"};
  verify_cmd->add_option("--suite", suite)
      ->check(CLI::IsMember({"spectral", "spectrum", "lifting"}));
  add_spec_options(verify_cmd, vspec, /*lists=*/true);
  verify_cmd->add_option("--output", csv_path);

  auto* dump_cmd = app.add_subcommand("dump-system", "Write assembled operators");
  add_spec_options(dump_cmd, spec, /*lists=*/false);
  dump_cmd->add_option("--prefix", prefix);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed()) {
      const sdhdg::Mesh2D mesh = sdhdg::build_structured_mesh(mesh_n, mesh_perturb, mesh_seed);
      sdhdg::validate_mesh(mesh);
      if (!mesh_out.empty()) sdhdg::save_mesh(mesh, mesh_out);
      std::printf("cells=%d faces=%d h_max=%.6g\n", mesh.num_cells(), mesh.num_faces(),
                  mesh.h_max);
      return 0;
    }

    if (solve_cmd->parsed() || sweep_cmd->parsed()) {
      const auto cells = expand(spec);
      if (solve_cmd->parsed() && cells.size() != 1)
        throw CLI::ValidationError("solve", "expects scalar parameters");
      const auto results = sdhdg::run_sweep(cells, jobs);
      if (!history_path.empty() && results.size() == 1)
        results[0].report.write_history_csv(history_path);
      return finish(results, csv_path, summary_path, allow_failures);
    }

    if (verify_cmd->parsed()) {
      bool ok = true;
      std::ofstream csv;
      if (!csv_path.empty()) csv.open(csv_path);
      if (suite == "spectral") {
        if (csv.is_open())
          csv << "n,k,mu,kappa,alpha,form_bound,form_infsup,coercivity,b_infsup,"
                 "lift_bound,trace_v,trace_q,facet_bound,equiv_lo,equiv_hi\n";
        for (int n : vspec.n)
          for (int k : vspec.k)
            for (double mu : vspec.mu)
              for (double kappa : vspec.kappa)
                for (double alpha : vspec.alpha) {
                  const sdhdg::Mesh2D mesh = sdhdg::build_structured_mesh(n);
                  const sdhdg::FormsContext ctx(k);
                  sdhdg::PhysicalParams p;
                  p.mu = mu;
                  p.kappa = kappa;
                  p.alpha = alpha;
                  p.k = k;
                  const auto r = sdhdg::spectral_suite(mesh, ctx, p);
                  std::printf(
                      "n=%d k=%d mu=%g kappa=%g alpha=%g | bound=%.4g infsup=%.4g "
                      "coer=%.4g b=%.4g lift=%.4g trv=%.4g trq=%.4g facet=%.4g "
                      "equiv=[%.4g,%.4g]\n",
                      n, k, mu, kappa, alpha, r.form_bound, r.form_infsup,
                      r.coercivity, r.b_infsup, r.lift_bound, r.trace_v, r.trace_q,
                      r.facet_bound, r.equiv_lo, r.equiv_hi);
                  for (double v : {r.form_bound, r.form_infsup, r.coercivity,
                                   r.b_infsup, r.lift_bound, r.trace_v, r.trace_q,
                                   r.facet_bound, r.equiv_lo, r.equiv_hi})
                    ok = ok && std::isfinite(v);
                  if (csv.is_open()) {
                    char buf[512];
                    std::snprintf(buf, sizeof(buf),
                                  "%d,%d,%.10g,%.10g,%.10g,%.8g,%.8g,%.8g,%.8g,%.8g,"
                                  "%.8g,%.8g,%.8g,%.8g,%.8g\n",
                                  n, k, mu, kappa, alpha, r.form_bound, r.form_infsup,
                                  r.coercivity, r.b_infsup, r.lift_bound, r.trace_v,
                                  r.trace_q, r.facet_bound, r.equiv_lo, r.equiv_hi);
                    csv << buf;
                  }
                }
      } else if (suite == "spectrum") {
        for (int n : vspec.n)
          for (int k : vspec.k)
            for (double mu : vspec.mu)
              for (double kappa : vspec.kappa)
                for (double alpha : vspec.alpha)
                  for (const auto& pre : vspec.precond) {
                    const sdhdg::Mesh2D mesh = sdhdg::build_structured_mesh(n);
                    const sdhdg::FormsContext ctx(k);
                    sdhdg::PhysicalParams p;
                    p.mu = mu;
                    p.kappa = kappa;
                    p.alpha = alpha;
                    p.k = k;
                    const auto iv = sdhdg::preconditioned_spectrum(
                        mesh, ctx, p, parse_precond(pre));
                    std::printf(
                        "n=%d k=%d mu=%g kappa=%g alpha=%g %s | [%.4g, %.4g] U "
                        "[%.4g, %.4g]\n",
                        n, k, mu, kappa, alpha, pre.c_str(), iv.neg_lo, iv.neg_hi,
                        iv.pos_lo, iv.pos_hi);
                    ok = ok && iv.neg_hi < 0.0 && iv.pos_lo > 0.0;
                  }
      } else {
        for (int n : vspec.n)
          for (int k : vspec.k)
            for (double mu : vspec.mu)
              for (double kappa : vspec.kappa)
                for (double alpha : vspec.alpha) {
                  const sdhdg::Mesh2D mesh = sdhdg::build_structured_mesh(n);
                  const sdhdg::FormsContext ctx(k);
                  sdhdg::PhysicalParams p;
                  p.mu = mu;
                  p.kappa = kappa;
                  p.alpha = alpha;
                  p.k = k;
                  const auto lr = sdhdg::lifting_ratios(mesh, ctx, p, 32, 1234u);
                  std::printf(
                      "n=%d k=%d mu=%g kappa=%g alpha=%g | vs=%.4g qs=%.4g vd=%.4g "
                      "qd=%.4g total=%.4g\n",
                      n, k, mu, kappa, alpha, lr.vs, lr.qs, lr.vd, lr.qd, lr.total);
                  for (double v : {lr.vs, lr.qs, lr.vd, lr.qd, lr.total})
                    ok = ok && std::isfinite(v);
                }
      }
      return ok ? 0 : 2;
    }

    if (dump_cmd->parsed()) {
      const auto cells = expand(spec);
      const sdhdg::ExperimentConfig& cfg = cells.front();
      const sdhdg::Mesh2D mesh =
          sdhdg::build_structured_mesh(cfg.n, cfg.perturb, cfg.seed);
      const sdhdg::FormsContext ctx(cfg.k);
      sdhdg::PhysicalParams p;
      p.mu = cfg.mu;
      p.kappa = cfg.kappa;
      p.alpha = cfg.alpha;
      p.k = cfg.k;
      sdhdg::ProblemData data;
      if (cfg.kind == sdhdg::CaseKind::Manufactured)
        data = sdhdg::make_smooth_case(p).data;
      else {
        p.kappa_field = sdhdg::rough_permeability;
        data = sdhdg::make_lid_driven_data();
      }
      const sdhdg::DofMap dofs = sdhdg::build_dofmap(mesh, cfg.k);
      const sdhdg::BlockSystem sys = sdhdg::assemble_system(mesh, ctx, p, data, dofs);
      const sdhdg::CondensedSystem cs(sys.A, sys.ncell, sys.slices);
      sdhdg::write_matrix_market(sys.A, prefix + "_full.mtx");
      sdhdg::write_matrix_market(cs.schur(), prefix + "_schur.mtx");
      sdhdg::write_matrix_market(sdhdg::assemble_norm_matrix(mesh, ctx, p, dofs),
                                 prefix + "_norm.mtx");
      std::ofstream rhs(prefix + "_rhs.txt");
      char buf[64];
      for (int i = 0; i < sys.rhs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", sys.rhs[i]);
        rhs << buf;
      }
      std::printf("wrote %s_{full,schur,norm}.mtx and %s_rhs.txt\n", prefix.c_str(),
                  prefix.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

#include "sdhdg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "sdhdg/condense.hpp"

namespace sdhdg {

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Mesh2D mesh = build_structured_mesh(cfg.n, cfg.perturb, cfg.seed);
  const FormsContext ctx(cfg.k);
  PhysicalParams params;
  params.mu = cfg.mu;
  params.kappa = cfg.kappa;
  params.alpha = cfg.alpha;
  params.k = cfg.k;

  ProblemData data;
  std::optional<ManufacturedCase> mc;
  if (cfg.kind == CaseKind::Manufactured) {
    mc = make_smooth_case(params);
    data = mc->data;
  } else {
    params.kappa_field = rough_permeability;
    data = make_lid_driven_data();
  }

  const DofMap dofs = build_dofmap(mesh, cfg.k);
  const BlockSystem sys = assemble_system(mesh, ctx, params, data, dofs);
  const CondensedSystem cs(sys.A, sys.ncell, sys.slices);
  const FacetPreconditioner P =
      build_precond(mesh, ctx, params, dofs, cfg.variant, cfg.mode, cfg.sweeps);

  // Consistent reduced right-hand side: drop the (tiny) component along the
  // facet kernel so the singular Schur system stays in range.
  Eigen::VectorXd fbar = cs.reduce_rhs(sys.rhs);
  const Eigen::VectorXd& z = P.kernel();
  fbar -= z * (z.dot(fbar) / z.dot(z));

  const Eigen::SparseMatrix<double>& S = cs.schur();
  const LinOp apply_A = [&S](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(S * x);
  };
  const LinOp apply_M = [&P](const Eigen::VectorXd& r) {
    return P.project_kernel(P.apply_inverse(r));
  };

  ExperimentResult res;
  res.config = cfg;
  Eigen::VectorXd xbar;
  res.report = (cfg.solver == SolverKind::Minres)
                   ? minres(apply_A, apply_M, fbar, xbar, cfg.tol, cfg.maxit)
                   : gmres(apply_A, apply_M, fbar, xbar, cfg.tol, cfg.maxit,
                           cfg.restart);
  res.compatibility = compatibility_residual(sys);
  res.solution = cs.recover(sys.rhs, xbar);
  if (mc) res.errors = compute_errors(mesh, ctx, dofs, res.solution, mc->exact);
  return res;
}

std::vector<ExperimentResult> run_sweep(const std::vector<ExperimentConfig>& cells,
                                        int jobs) {
  std::vector<ExperimentResult> out(cells.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) out[i] = run_experiment(cells[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      out[i] = run_experiment(cells[i]);
    }
  };
  std::vector<std::thread> threads;
  const int nt = std::min<int>(jobs, static_cast<int>(cells.size()));
  threads.reserve(nt);
  for (int t = 0; t < nt; ++t) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  return out;
}

const char* to_string(CaseKind k) {
  return k == CaseKind::Manufactured ? "manufactured" : "heterogeneous";
}
const char* to_string(SolverKind s) {
  return s == SolverKind::Minres ? "minres" : "gmres";
}
const char* to_string(PrecondVariant v) {
  return v == PrecondVariant::P ? "P" : "Phat";
}
const char* to_string(PrecondMode m) {
  return m == PrecondMode::Exact ? "exact" : "inexact";
}

std::string result_csv_header() {
  return "case,solver,precond,mode,n,k,mu,kappa,alpha,iterations,converged,"
         "final_residual,compatibility,velocity_error,pressure_error";
}

std::string result_csv_row(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const double final_res = r.report.history.empty() ? 0.0 : r.report.history.back();
  char buf[384];
  std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%d,%d,%.10g,%.10g,%.10g,%d,%d,%.6e,%.6e",
                to_string(c.kind), to_string(c.solver), to_string(c.variant),
                to_string(c.mode), c.n, c.k, c.mu, c.kappa, c.alpha,
                r.report.iterations, r.report.converged ? 1 : 0, final_res,
                r.compatibility);
  std::string row(buf);
  if (r.errors) {
    std::snprintf(buf, sizeof(buf), ",%.10e,%.10e", r.errors->velocity_l2,
                  r.errors->pressure_l2);
    row += buf;
  } else {
    row += ",,";
  }
  return row;
}

void write_results_csv(const std::vector<ExperimentResult>& results,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_results_csv: cannot open " + path);
  out << result_csv_header() << "\n";
  for (const auto& r : results) out << result_csv_row(r) << "\n";
}

}  // namespace sdhdg

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdhdg/error_norms.hpp"
#include "sdhdg/krylov.hpp"
#include "sdhdg/manufactured.hpp"
#include "sdhdg/precond.hpp"

namespace sdhdg {

enum class CaseKind { Manufactured, Heterogeneous };
enum class SolverKind { Minres, Gmres };

struct ExperimentConfig {
  CaseKind kind = CaseKind::Manufactured;
  int n = 8;
  int k = 2;
  double mu = 1.0, kappa = 1.0, alpha = 1.0;
  SolverKind solver = SolverKind::Minres;
  PrecondVariant variant = PrecondVariant::Phat;
  PrecondMode mode = PrecondMode::Exact;
  int sweeps = 5;
  double tol = 1e-8;
  int maxit = 2000;
  int restart = 0;       // gmres cycle length, 0 = full
  double perturb = 0.0;  // interior-vertex jitter amplitude
  unsigned seed = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  SolverReport report;
  double compatibility = 0.0;          // kernel component of the right-hand side
  std::optional<FieldErrors> errors;   // present for the manufactured case
  Eigen::VectorXd solution;            // recovered full free-dof vector
};

// Assemble the configured case, condense, solve the facet system with the
// kernel-projected block preconditioner, recover, and (when a reference
// solution exists) measure errors.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Dispatch sweep cells over `jobs` worker threads (jobs <= 1 runs inline);
// results keep the input order.
std::vector<ExperimentResult> run_sweep(const std::vector<ExperimentConfig>& cells,
                                        int jobs);

// Deterministic CSV encoding (no timing columns, so identical configs give
// byte-identical files).
std::string result_csv_header();
std::string result_csv_row(const ExperimentResult& r);
void write_results_csv(const std::vector<ExperimentResult>& results,
                       const std::string& path);

const char* to_string(CaseKind k);
const char* to_string(SolverKind s);
const char* to_string(PrecondVariant v);
const char* to_string(PrecondMode m);

}  // namespace sdhdg

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace sdhdg {

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct SolverReport {
  std::string solver;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // relative preconditioned residual per iteration
  double seconds = 0.0;

  void write_history_csv(const std::string& path) const;
};

// Preconditioned minimum-residual iteration for symmetric A with symmetric
// positive (semi)definite Minv. Stops when the Minv-weighted residual norm
// drops below tol relative to the initial one. x is overwritten (zero start).
SolverReport minres(const LinOp& A, const LinOp& Minv, const Eigen::VectorXd& b,
                    Eigen::VectorXd& x, double tol = 1e-8, int maxit = 2000);

// Left-preconditioned GMRES with modified Gram-Schmidt and Givens updates.
// restart <= 0 means full (no restart). Stopping: || Minv (b - A x) || relative
// to || Minv b ||.
SolverReport gmres(const LinOp& A, const LinOp& Minv, const Eigen::VectorXd& b,
                   Eigen::VectorXd& x, double tol = 1e-8, int maxit = 2000,
                   int restart = 0);

}  // namespace sdhdg

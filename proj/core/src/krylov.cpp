#include "sdhdg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sdhdg {

void SolverReport::write_history_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_history_csv: cannot open " + path);
  out << "iteration,relative_residual\n";
  char buf[64];
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12e\n", i, history[i]);
    out << buf;
  }
}

SolverReport minres(const LinOp& A, const LinOp& Minv, const Eigen::VectorXd& b,
                    Eigen::VectorXd& x, double tol, int maxit) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverReport rep;
  rep.solver = "minres";
  const int n = static_cast<int>(b.size());
  x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v = b;
  Eigen::VectorXd z = Minv(v);
  double gamma_old = 1.0;
  double gamma = std::sqrt(std::max(0.0, z.dot(v)));
  const double resid0 = gamma;
  rep.history.push_back(1.0);
  if (resid0 == 0.0) {
    rep.converged = true;
    return rep;
  }
  double eta = gamma;
  double s_old = 0.0, s = 0.0, c_old = 1.0, c = 1.0;
  Eigen::VectorXd w_old = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);

  for (int j = 1; j <= maxit; ++j) {
    z /= gamma;
    const Eigen::VectorXd Az = A(z);
    const double delta = z.dot(Az);
    Eigen::VectorXd v_new = Az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
    Eigen::VectorXd z_new = Minv(v_new);
    const double gamma_new = std::sqrt(std::max(0.0, z_new.dot(v_new)));

    const double a0 = c * delta - c_old * s * gamma;
    const double a1 = std::hypot(a0, gamma_new);
    const double a2 = s * delta + c_old * c * gamma;
    const double a3 = s_old * gamma;
    if (a1 == 0.0) break;  // exact breakdown; residual already reflected in eta
    const double c_new = a0 / a1;
    const double s_new = gamma_new / a1;
    Eigen::VectorXd w_new = (z - a3 * w_old - a2 * w) / a1;
    x += (c_new * eta) * w_new;
    eta = -s_new * eta;

    v_old.swap(v);
    v.swap(v_new);
    z.swap(z_new);
    gamma_old = gamma;
    gamma = gamma_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;
    w_old.swap(w);
    w.swap(w_new);

    rep.iterations = j;
    const double rel = std::abs(eta) / resid0;
    rep.history.push_back(rel);
    if (rel <= tol) {
      rep.converged = true;
      break;
    }
    if (gamma == 0.0) break;  // Krylov space exhausted
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SolverReport gmres(const LinOp& A, const LinOp& Minv, const Eigen::VectorXd& b,
                   Eigen::VectorXd& x, double tol, int maxit, int restart) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverReport rep;
  rep.solver = "gmres";
  const int n = static_cast<int>(b.size());
  x = Eigen::VectorXd::Zero(n);
  if (restart <= 0) restart = maxit;

  double resid0 = -1.0;
  int total = 0;
  while (total < maxit) {
    Eigen::VectorXd r = Minv(b - A(x));
    double beta = r.norm();
    if (resid0 < 0.0) {
      resid0 = beta;
      rep.history.push_back(1.0);
      if (resid0 == 0.0) {
        rep.converged = true;
        break;
      }
    }
    const int cycle = std::min(restart, maxit - total);
    std::vector<Eigen::VectorXd> V;
    V.reserve(cycle + 1);
    V.push_back(r / beta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(cycle + 1, cycle);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(cycle + 1);
    g[0] = beta;
    Eigen::VectorXd cs = Eigen::VectorXd::Ones(cycle);
    Eigen::VectorXd sn = Eigen::VectorXd::Zero(cycle);

    int j = 0;
    bool cycle_converged = false;
    for (; j < cycle; ++j) {
      Eigen::VectorXd w = Minv(A(V[j]));
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V[i].dot(w);
        w -= H(i, j) * V[i];
      }
      const double hnext = w.norm();
      H(j + 1, j) = hnext;

      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = H(j, j) / denom;
      sn[j] = H(j + 1, j) / denom;
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++total;
      rep.iterations = total;
      const double rel = std::abs(g[j + 1]) / resid0;
      rep.history.push_back(rel);
      if (rel <= tol) {  // covers the happy breakdown hnext == 0
        cycle_converged = true;
        ++j;
        break;
      }
      if (hnext == 0.0) {
        ++j;
        break;
      }
      V.push_back(w / hnext);
    }

    // x += V y with H y = g on the first j columns.
    if (j > 0) {
      Eigen::VectorXd y =
          H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
      for (int i = 0; i < j; ++i) x += y[i] * V[i];
    }
    if (cycle_converged) {
      rep.converged = true;
      break;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace sdhdg

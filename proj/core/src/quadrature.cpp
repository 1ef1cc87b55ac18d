#include "sdhdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sdhdg {

namespace {

// Golub-Welsch: nodes/weights on [-1,1] from the symmetric tridiagonal
// recurrence matrix; weights are mu0 * (first eigenvector component)^2.
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                  double mu0, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const int m = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < m) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

// Gauss-Legendre on [-1,1] with m points (exact through 2m-1).
void gauss_legendre(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(m > 1 ? m - 1 : 0);
  for (int k = 1; k < m; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  golub_welsch(diag, off, 2.0, nodes, weights);
}

// Gauss-Jacobi with weight (1-x) on [-1,1], m points (exact through 2m-1).
void gauss_jacobi_10(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(m > 1 ? m - 1 : 0);
  for (int k = 0; k < m; ++k)
    diag[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < m; ++k)
    off[k - 1] = std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
  golub_welsch(diag, off, 2.0, nodes, weights);
}

int points_for(int degree) { return degree / 2 + 1; }

}  // namespace

QuadRule edge_quadrature(int degree) {
  if (degree < 0 || degree > 80)
    throw std::invalid_argument("edge_quadrature: degree out of range");
  const int m = points_for(degree);
  Eigen::VectorXd x, w;
  gauss_legendre(m, x, w);
  QuadRule rule;
  rule.points.resize(m, 1);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.points(i, 0) = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  rule.exactness = 2 * m - 1;
  return rule;
}

QuadRule triangle_quadrature(int degree) {
  if (degree < 0 || degree > 80)
    throw std::invalid_argument("triangle_quadrature: degree out of range");
  const int m = points_for(degree);
  Eigen::VectorXd xu, wu, xv, wv;
  gauss_legendre(m, xu, wu);
  gauss_jacobi_10(m, xv, wv);

  // Duffy map (u, v) -> (u(1-v), v): du dv (1-v) becomes the triangle measure,
  // so the Jacobi factor makes the product rule exact for total degree 2m-1.
  QuadRule rule;
  rule.points.resize(m * m, 2);
  rule.weights.resize(m * m);
  int q = 0;
  for (int i = 0; i < m; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < m; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      rule.points(q, 0) = u * (1.0 - v);
      rule.points(q, 1) = v;
      rule.weights[q] = (0.5 * wu[i]) * (0.25 * wv[j]);
      ++q;
    }
  }
  rule.exactness = 2 * m - 1;
  return rule;
}

}  // namespace sdhdg

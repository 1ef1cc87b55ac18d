#pragma once

#include <Eigen/Dense>

namespace sdhdg {

// Positive-weight rule on the reference triangle {(0,0),(1,0),(0,1)} or the
// reference edge [0,1]. `exactness` is the guaranteed polynomial degree.
struct QuadRule {
  Eigen::MatrixXd points;   // npts x 2 (triangle) or npts x 1 (edge)
  Eigen::VectorXd weights;  // sums to the reference measure (1/2 resp. 1)
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

// Gauss-Legendre on [0,1], exact through `degree`.
QuadRule edge_quadrature(int degree);

// Collapsed Gauss-Legendre x Gauss-Jacobi(1,0) rule, exact through `degree`.
QuadRule triangle_quadrature(int degree);

}  // namespace sdhdg

#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace sdhdg {

// Exact monomial moments of the reference elements; shared with the tests as
// the closed-form integration route.
double monomial_integral_triangle(int a, int b);  // int_T x^a y^b
double monomial_integral_edge(int a);             // int_0^1 s^a

// L2-orthonormal modal basis on the reference triangle {(0,0),(1,0),(0,1)},
// built by Cholesky of the exact monomial Gram matrix. Functions are stored as
// monomial coefficient rows so values and derivatives are exact.
class CellBasis {
 public:
  explicit CellBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(powers_.size()); }
  const std::vector<std::array<int, 2>>& monomial_powers() const { return powers_; }
  const Eigen::MatrixXd& coefficients() const { return coeff_; }

  // values(i, q) = phi_i(points row q); points are npts x 2 reference coords.
  Eigen::MatrixXd values(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd ddx(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd ddy(const Eigen::MatrixXd& points) const;

 private:
  int degree_;
  std::vector<std::array<int, 2>> powers_;
  Eigen::MatrixXd coeff_;  // size x nmono
};

// L2-orthonormal basis on the reference edge [0,1] (shifted Legendre).
class FaceBasis {
 public:
  explicit FaceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  const Eigen::MatrixXd& coefficients() const { return coeff_; }

  Eigen::MatrixXd values(const Eigen::VectorXd& points) const;

 private:
  int degree_;
  Eigen::MatrixXd coeff_;  // size x (degree+1), monomial coefficients
};

// Barycentric (nodal P1) helpers on the reference triangle; used for geometry
// interpolation and as the vertex-nodal basis in sanity checks.
Eigen::Vector3d barycentric(const Eigen::Vector2d& ref_point);

}  // namespace sdhdg

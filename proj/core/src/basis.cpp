#include "sdhdg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace sdhdg {

double monomial_integral_triangle(int a, int b) {
  // int_T x^a y^b dx dy = a! b! / (a + b + 2)!
  double value = 1.0;
  // a! b! / (a+b+2)! computed as a product of ratios to stay in range.
  for (int i = 1; i <= a; ++i) value *= static_cast<double>(i);
  for (int i = 1; i <= b; ++i) value *= static_cast<double>(i);
  for (int i = 1; i <= a + b + 2; ++i) value /= static_cast<double>(i);
  return value;
}

double monomial_integral_edge(int a) { return 1.0 / (a + 1.0); }

CellBasis::CellBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 10)
    throw std::invalid_argument("CellBasis: degree out of range");
  for (int total = 0; total <= degree; ++total)
    for (int a = total; a >= 0; --a) powers_.push_back({a, total - a});

  const int n = size();
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = monomial_integral_triangle(powers_[i][0] + powers_[j][0],
                                              powers_[i][1] + powers_[j][1]);
  // gram = L L^T; rows of L^{-1} give an orthonormal set.
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("CellBasis: Gram matrix not positive definite");
  coeff_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
}

namespace {

Eigen::MatrixXd monomial_table(const std::vector<std::array<int, 2>>& powers,
                               const Eigen::MatrixXd& pts, int dx, int dy) {
  const int n = static_cast<int>(powers.size());
  const int q = static_cast<int>(pts.rows());
  Eigen::MatrixXd table(n, q);
  for (int i = 0; i < n; ++i) {
    const int a = powers[i][0], b = powers[i][1];
    double factor = 1.0;
    const int aa = a - dx, bb = b - dy;
    if (aa < 0 || bb < 0) {
      table.row(i).setZero();
      continue;
    }
    for (int d = 0; d < dx; ++d) factor *= a - d;
    for (int d = 0; d < dy; ++d) factor *= b - d;
    for (int p = 0; p < q; ++p)
      table(i, p) = factor * std::pow(pts(p, 0), aa) * std::pow(pts(p, 1), bb);
  }
  return table;
}

}  // namespace

Eigen::MatrixXd CellBasis::values(const Eigen::MatrixXd& points) const {
  return coeff_ * monomial_table(powers_, points, 0, 0);
}

Eigen::MatrixXd CellBasis::ddx(const Eigen::MatrixXd& points) const {
  return coeff_ * monomial_table(powers_, points, 1, 0);
}

Eigen::MatrixXd CellBasis::ddy(const Eigen::MatrixXd& points) const {
  return coeff_ * monomial_table(powers_, points, 0, 1);
}

FaceBasis::FaceBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 10)
    throw std::invalid_argument("FaceBasis: degree out of range");
  const int n = degree + 1;
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = monomial_integral_edge(i + j);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("FaceBasis: Gram matrix not positive definite");
  coeff_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::MatrixXd FaceBasis::values(const Eigen::VectorXd& points) const {
  const int n = size();
  const int q = static_cast<int>(points.size());
  Eigen::MatrixXd mono(n, q);
  for (int p = 0; p < q; ++p) {
    double s = 1.0;
    for (int i = 0; i < n; ++i) {
      mono(i, p) = s;
      s *= points[p];
    }
  }
  return coeff_ * mono;
}

Eigen::Vector3d barycentric(const Eigen::Vector2d& p) {
  return {1.0 - p.x() - p.y(), p.x(), p.y()};
}

}  // namespace sdhdg

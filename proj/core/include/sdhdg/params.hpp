#pragma once

#include <Eigen/Dense>
#include <functional>

namespace sdhdg {

// Coefficients of the coupled problem. kappa may be a constant or a positive
// field evaluated pointwise at quadrature points.
struct PhysicalParams {
  double mu = 1.0;
  double kappa = 1.0;
  std::function<double(const Eigen::Vector2d&)> kappa_field;  // overrides `kappa` if set
  double alpha = 1.0;
  int k = 2;           // polynomial degree of velocity and trace spaces
  double eta = -1.0;   // interior-penalty parameter; negative means default 4k^2
  double c_alpha = 5.0;  // admissibility bound alpha <= c_alpha * sqrt(kappa)

  double kappa_at(const Eigen::Vector2d& x) const {
    return kappa_field ? kappa_field(x) : kappa;
  }
  double penalty() const { return eta > 0.0 ? eta : 4.0 * k * k; }
  bool alpha_admissible(double kappa_value) const {
    return alpha <= c_alpha * std::sqrt(kappa_value);
  }
};

}  // namespace sdhdg

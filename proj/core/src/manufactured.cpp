#include "sdhdg/manufactured.hpp"

#include <cmath>
#include <stdexcept>

namespace sdhdg {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

ManufacturedCase make_smooth_case(const PhysicalParams& params) {
  if (params.kappa_field)
    throw std::invalid_argument("smooth case requires a constant permeability");
  const double mu = params.mu;
  const double kappa = params.kappa;
  const double alpha = params.alpha;

  ManufacturedCase mc;
  mc.exact.velocity = [](const Eigen::Vector2d& x, Region r) {
    const double s = std::sin(kPi * x[0]);
    const double c = std::cos(kPi * x[0]);
    const double e = std::exp(0.5 * x[1]);
    const double ux =
        (r == Region::Stokes) ? -s * e / (2.0 * kPi * kPi) : -2.0 * s * e;
    return Eigen::Vector2d(ux, c * e / kPi);
  };
  mc.exact.pressure = [mu, kappa](const Eigen::Vector2d& x, Region r) {
    const double scale = (r == Region::Stokes) ? 1.0 : 2.0;
    return -scale * mu / (kPi * kappa) * std::cos(kPi * x[0]) * std::exp(0.5 * x[1]);
  };

  // Momentum residual of the top-region fields (the strain divergence reduces
  // to the Laplacian because the velocity is divergence free).
  mc.data.f_s = [mu, kappa](const Eigen::Vector2d& x) {
    const double s = std::sin(kPi * x[0]);
    const double c = std::cos(kPi * x[0]);
    const double e = std::exp(0.5 * x[1]);
    const double fx = mu * s * e * (-0.5 + 1.0 / (8.0 * kPi * kPi) + 1.0 / kappa);
    const double fy =
        mu * c * e * (kPi - 1.0 / (4.0 * kPi) - 1.0 / (2.0 * kPi * kappa));
    return Eigen::Vector2d(fx, fy);
  };
  mc.data.f_d = [](const Eigen::Vector2d& x) {
    return (2.0 * kPi - 1.0 / (2.0 * kPi)) * std::cos(kPi * x[0]) *
           std::exp(0.5 * x[1]);
  };
  mc.data.dirichlet_s = [u = mc.exact.velocity](const Eigen::Vector2d& x) {
    return u(x, Region::Stokes);
  };
  // Outer bottom boundary: the side flux vanishes (sin is zero at x = 0, 1),
  // only the bottom edge contributes u.n = -u2.
  mc.data.darcy_flux = [u = mc.exact.velocity](const Eigen::Vector2d& x) {
    Eigen::Vector2d n(0.0, -1.0);
    if (x[0] <= 0.0) n = Eigen::Vector2d(-1.0, 0.0);
    if (x[0] >= 1.0) n = Eigen::Vector2d(1.0, 0.0);
    return u(x, Region::Darcy).dot(n);
  };
  // Normal-stress jump of the exact fields across y = 1/2; vanishes at kappa=1.
  mc.data.iface_normal_src = [mu, kappa](const Eigen::Vector2d& x) {
    return mu / kPi * (1.0 / kappa - 1.0) * std::cos(kPi * x[0]) *
           std::exp(0.5 * x[1]);
  };
  // Slip-law residual (tangential, so only the x component is nonzero on the
  // flat interface).
  mc.data.iface_tangent_src = [mu, kappa, alpha](const Eigen::Vector2d& x) {
    const double gx = mu * std::sin(kPi * x[0]) * std::exp(0.5 * x[1]) *
                      (-(1.0 + 1.0 / (4.0 * kPi * kPi)) +
                       alpha / std::sqrt(kappa) / (2.0 * kPi * kPi));
    return Eigen::Vector2d(gx, 0.0);
  };
  return mc;
}

double rough_permeability(const Eigen::Vector2d& x) {
  const double a = std::sin(10.0 * kPi * x[0]) * std::cos(20.0 * kPi * x[1] * x[1]);
  const double c = std::cos(6.4 * kPi * x[0]);
  const double b = c * c * std::sin(9.2 * kPi * x[1]);
  return 700.0 * (1.0 + 0.5 * (a + b)) + 100.0;
}

ProblemData make_lid_driven_data() {
  ProblemData data;
  data.dirichlet_s = [](const Eigen::Vector2d& x) {
    if (x[1] >= 1.0 - 1e-12)
      return Eigen::Vector2d(x[1] * (1.5 - x[1]) / 5.0, 0.0);
    return Eigen::Vector2d(0.0, 0.0);
  };
  return data;
}

}  // namespace sdhdg

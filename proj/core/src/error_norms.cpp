#include "sdhdg/error_norms.hpp"

#include <cmath>

#include "sdhdg/quadrature.hpp"

namespace sdhdg {

FieldErrors compute_errors(const Mesh2D& mesh, const FormsContext& ctx,
                           const DofMap& dofs, const Eigen::VectorXd& solution,
                           const ExactFields& exact) {
  const QuadRule rule = triangle_quadrature(2 * ctx.k + 10);
  const Eigen::MatrixXd vv = ctx.vel_basis.values(rule.points);
  const Eigen::MatrixXd pv = ctx.pres_basis.values(rule.points);
  const int nq = static_cast<int>(rule.weights.size());

  double area = 0.0, mean_h = 0.0, mean_ex = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const Region r = mesh.cell_region[c];
    const auto cp = solution.segment(dofs.cell_offset[c] + 2 * dofs.nvel, dofs.npres);
    for (int q = 0; q < nq; ++q) {
      const double w = rule.weights[q] * geom.detJ;
      const Eigen::Vector2d x = geom.to_phys(rule.points.row(q).transpose());
      area += w;
      mean_h += w * cp.dot(pv.col(q));
      mean_ex += w * exact.pressure(x, r);
    }
  }
  FieldErrors err;
  err.pressure_shift = (mean_ex - mean_h) / area;

  double v2 = 0.0, p2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const Region r = mesh.cell_region[c];
    const auto cu = solution.segment(dofs.cell_offset[c], dofs.nvel);
    const auto cv = solution.segment(dofs.cell_offset[c] + dofs.nvel, dofs.nvel);
    const auto cp = solution.segment(dofs.cell_offset[c] + 2 * dofs.nvel, dofs.npres);
    for (int q = 0; q < nq; ++q) {
      const double w = rule.weights[q] * geom.detJ;
      const Eigen::Vector2d x = geom.to_phys(rule.points.row(q).transpose());
      const Eigen::Vector2d uh(cu.dot(vv.col(q)), cv.dot(vv.col(q)));
      v2 += w * (uh - exact.velocity(x, r)).squaredNorm();
      const double ph = cp.dot(pv.col(q)) + err.pressure_shift;
      const double d = ph - exact.pressure(x, r);
      p2 += w * d * d;
    }
  }
  err.velocity_l2 = std::sqrt(v2);
  err.pressure_l2 = std::sqrt(p2);
  return err;
}

}  // namespace sdhdg

#pragma once

#include <Eigen/Dense>

#include "sdhdg/assembly.hpp"

namespace sdhdg {

struct FieldErrors {
  double velocity_l2 = 0.0;
  double pressure_l2 = 0.0;
  double pressure_shift = 0.0;  // constant added to the discrete pressure
};

// Cellwise L2 errors against the reference fields. The discrete pressure is
// shifted so its mean matches the reference mean (it is determined only up to
// a constant). Quadrature is oversampled well beyond the spaces' degree so the
// non-polynomial reference fields are integrated accurately.
FieldErrors compute_errors(const Mesh2D& mesh, const FormsContext& ctx,
                           const DofMap& dofs, const Eigen::VectorXd& solution,
                           const ExactFields& exact);

}  // namespace sdhdg

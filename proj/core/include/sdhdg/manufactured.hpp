#pragma once

#include <Eigen/Dense>

#include "sdhdg/assembly.hpp"
#include "sdhdg/params.hpp"

namespace sdhdg {

// Smooth reference solution on the split unit square. The velocity is
// divergence free in the top region, satisfies the seepage law exactly in the
// bottom region (constant permeability), and its normal component is
// continuous across y = 1/2. The normal-stress and slip conditions are not
// satisfied identically; their residuals enter as interface sources so the
// discrete solution still converges to these fields for every (mu, kappa,
// alpha). Requires a constant permeability.
struct ManufacturedCase {
  ExactFields exact;
  ProblemData data;
};

ManufacturedCase make_smooth_case(const PhysicalParams& params);

// Oscillatory permeability with range [100, 1500] on the unit square.
double rough_permeability(const Eigen::Vector2d& x);

// Driven-flow configuration: prescribed horizontal velocity on the top edge,
// homogeneous data elsewhere. No closed-form solution; used for iteration
// sweeps only.
ProblemData make_lid_driven_data();

}  // namespace sdhdg

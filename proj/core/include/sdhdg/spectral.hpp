#pragma once

#include <Eigen/Dense>

#include "sdhdg/assembly.hpp"
#include "sdhdg/precond.hpp"

namespace sdhdg {

// Well-posedness constants of one (mesh, parameter) configuration, computed
// as extreme generalized eigenvalues in the weighted metrics by dense
// decompositions. Intended for n <= 4.
struct StabilityReport {
  double form_bound = 0;    // largest |lambda| of the full form against the norm
  double form_infsup = 0;   // smallest |lambda|, pressure-constant removed
  double coercivity = 0;    // smallest eigenvalue of the velocity block pencil
  double b_infsup = 0;      // smallest nonzero singular value of the coupling
  double lift_bound = 0;    // sqrt(max lifted-facet energy over the Schur norm)
  double trace_v = 0;       // interface bound for the trace velocity
  double trace_q = 0;       // interface bound for the bottom trace pressure
  double facet_bound = 0;   // trace-roughness against cell-energy bound
  double equiv_lo = 0, equiv_hi = 0;  // blockwise Phat-against-P interval
};

StabilityReport spectral_suite(const Mesh2D& mesh, const FormsContext& ctx,
                               const PhysicalParams& params);

// Eigenvalue intervals of the preconditioned condensed operator after removing
// the pressure-constant direction: [neg_lo, neg_hi] < 0 < [pos_lo, pos_hi].
struct SpectrumIntervals {
  double neg_lo = 0, neg_hi = 0, pos_lo = 0, pos_hi = 0;
};
SpectrumIntervals preconditioned_spectrum(const Mesh2D& mesh, const FormsContext& ctx,
                                          const PhysicalParams& params,
                                          PrecondVariant variant);

// Worst sampled ratios of the local-solver lifting estimates, over
// deterministic Gaussian facet vectors. Each entry is max over samples of a
// left quadratic form divided by its bounding right form; uniformity of these
// ratios across parameters is what the robustness argument needs.
struct LiftingRatios {
  double vs = 0;     // top velocity energy of the lifted pair / facet data norms
  double qs = 0;     // top pressure norm / (penalty x same data)
  double vd = 0;     // bottom velocity mass / condensed diffusion energy
  double qd = 0;     // bottom pressure norm / bottom velocity mass
  double total = 0;  // full weighted norm / eta-weighted Schur block norms
};
LiftingRatios lifting_ratios(const Mesh2D& mesh, const FormsContext& ctx,
                             const PhysicalParams& params, int nsamples,
                             unsigned seed);

// Orthonormal basis of the Euclidean orthogonal complement of v.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& v);

// Eigenvalues of the symmetric pencil (A, B), B positive definite; inputs are
// symmetrized.
Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace sdhdg

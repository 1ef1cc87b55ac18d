#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "sdhdg/dofmap.hpp"
#include "sdhdg/forms.hpp"

namespace sdhdg {

// Problem data; null entries mean identically zero.
struct ProblemData {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> f_s;  // top-region body force
  std::function<double(const Eigen::Vector2d&)> f_d;           // bottom-region source
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> dirichlet_s;  // velocity on the outer top boundary
  std::function<double(const Eigen::Vector2d&)> darcy_flux;    // u.n (outward) on the outer bottom boundary
  // Interface condition residuals of the exact solution; both are zero for a
  // solution satisfying the coupling conditions and otherwise enter the trace
  // velocity rows with a minus sign.
  std::function<double(const Eigen::Vector2d&)> iface_normal_src;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> iface_tangent_src;
};

// Per-cell slice of the free system: contiguous cell dofs plus the coupled
// free facet dofs (positions within the facet block).
struct CellSlice {
  int offset = 0;  // first cell dof (free id; cell dofs are never constrained)
  int size = 0;
  std::vector<int> facet;  // free facet positions, element-layout order, -1 for constrained
};

struct BlockSystem {
  Eigen::SparseMatrix<double> A;  // free x free, symmetric indefinite
  Eigen::VectorXd rhs;
  int ncell = 0;  // partition between cell and facet dofs
  DofMap dofs;
  std::vector<CellSlice> slices;
  Eigen::VectorXd nullspace;  // (u=0, p=1, pbar_s=1, pbar_d=1) on free dofs
};

BlockSystem assemble_system(const Mesh2D& mesh, const FormsContext& ctx,
                            const PhysicalParams& params, const ProblemData& data,
                            const DofMap& dofs);

// Matrix of the weighted velocity/pressure inner product on free dofs; this is
// also the Riesz-map preconditioner form before condensation.
Eigen::SparseMatrix<double> assemble_norm_matrix(const Mesh2D& mesh,
                                                 const FormsContext& ctx,
                                                 const PhysicalParams& params,
                                                 const DofMap& dofs);

// Individual terms of the weighted-norm matrix on free dofs: top-region
// velocity energy, bottom-region velocity mass, interface slip penalty,
// the two pressure inner products, and the interface dual pressure weight.
// Their sum is assemble_norm_matrix.
struct NormParts {
  Eigen::SparseMatrix<double> vel_s, vel_d, vel_iface;
  Eigen::SparseMatrix<double> pres_s, pres_d, pres_iface;
};
NormParts assemble_norm_parts(const Mesh2D& mesh, const FormsContext& ctx,
                              const PhysicalParams& params, const DofMap& dofs);

// Free velocity dofs (cell u + trace u) and pressure dofs (cell p + both trace
// pressures) in free numbering; the norm matrix is block diagonal across them.
void split_velocity_pressure(const Mesh2D& mesh, const DofMap& dofs,
                             std::vector<int>& velocity, std::vector<int>& pressure);

// Global trace-roughness seminorm matrix over the trace-velocity segment
// (size dofs.ubar_free), summed over top-region cells.
Eigen::SparseMatrix<double> assemble_facet_seminorm(const Mesh2D& mesh,
                                                    const FormsContext& ctx,
                                                    const DofMap& dofs);

// |z^T rhs| / ||rhs|| with z the pressure kernel; nonzero means incompatible data.
double compatibility_residual(const BlockSystem& sys);

// Coordinate-format (MatrixMarket) dump, 1-based, general.
void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path);

// Interpolate exact fields into a full free-dof vector (cellwise L2 projection
// of velocity/pressure, facewise projection of traces). Used by error
// reporting and consistency checks.
struct ExactFields {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, Region)> velocity;
  std::function<double(const Eigen::Vector2d&, Region)> pressure;
};
Eigen::VectorXd project_exact(const Mesh2D& mesh, const FormsContext& ctx,
                              const DofMap& dofs, const ExactFields& exact);

}  // namespace sdhdg

#pragma once

#include <Eigen/Dense>
#include <array>

#include "sdhdg/basis.hpp"
#include "sdhdg/mesh.hpp"
#include "sdhdg/params.hpp"
#include "sdhdg/quadrature.hpp"

namespace sdhdg {

// Bases and reference quadrature for degree k. `quad_boost` raises the
// exactness of all rules (used when kappa is a rough field).
struct FormsContext {
  int k;
  CellBasis vel_basis;   // degree k
  CellBasis pres_basis;  // degree k-1
  FaceBasis face_basis;  // degree k
  QuadRule cell_rule;
  QuadRule edge_rule;
  Eigen::MatrixXd vel_values, vel_dx, vel_dy;     // tables at cell_rule points
  Eigen::MatrixXd pres_values, pres_dx, pres_dy;

  explicit FormsContext(int k, int quad_boost = 0);

  int nvel() const { return vel_basis.size(); }        // scalar modes per component
  int npres() const { return pres_basis.size(); }
  int nface() const { return face_basis.size(); }      // modes per face field component
};

// Affine geometry of one cell.
struct CellGeometry {
  int cell = -1;
  Eigen::Vector2d v0;
  Eigen::Matrix2d J, Jinv;
  double detJ = 0.0;
  double h = 0.0;
  std::array<int, 3> face_ids{};
  std::array<Eigen::Vector2d, 3> normal{};  // outward unit normals
  std::array<double, 3> face_len{};

  Eigen::Vector2d to_phys(const Eigen::Vector2d& ref) const { return v0 + J * ref; }
  Eigen::Vector2d to_ref(const Eigen::Vector2d& phys) const { return Jinv * (phys - v0); }
};
CellGeometry cell_geometry(const Mesh2D& mesh, int cell);

// Cell-basis traces and face-basis values on one face of a cell, at the edge
// rule points of the face's global parameterization. Derivative tables hold
// physical derivatives.
struct FaceTrace {
  Eigen::MatrixXd phys;                        // qf x 2 physical points
  Eigen::VectorXd w;                           // physical weights (sum to face length)
  Eigen::MatrixXd vel_values, vel_dx, vel_dy;  // nvel x qf
  Eigen::MatrixXd pres_values, pres_dx, pres_dy;
  Eigen::MatrixXd face_values;                 // nface x qf
  Eigen::Vector2d normal;                      // outward from the cell
  double len = 0.0;
};
FaceTrace face_trace(const Mesh2D& mesh, const FormsContext& ctx,
                     const CellGeometry& geom, int local_face);

// --- Element matrices -------------------------------------------------------
//
// Velocity pair layout on a cell (size 2*nvel + 6*nface):
//   [u_x modes | u_y modes | face0: ubar_x, ubar_y | face1: ... | face2: ...]
// Pressure pair layout on a cell (size npres + 3*nface):
//   [p modes | face0: pbar | face1: pbar | face2: pbar]
// Face trace layout on a single face (size 2*nface): [ubar_x | ubar_y].

// Viscous bulk block: 2mu (eps(u),eps(v))_K
//   + 2 mu eta/h_K <(u-ubar),(v-vbar)>_dK
//   - 2mu <eps(u)n,(v-vbar)>_dK - 2mu <eps(v)n,(u-ubar)>_dK.
Eigen::MatrixXd stokes_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                   const PhysicalParams& p, int cell);

// Velocity-norm block without the consistency terms:
//   2mu (eps,eps)_K + 2 mu eta/h_K <(u-ubar),(v-vbar)>_dK.
Eigen::MatrixXd vs_inner_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell);

// Porous mass block mu kappa^{-1} (u,v)_K over [u_x | u_y].
Eigen::MatrixXd darcy_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                  const PhysicalParams& p, int cell);

// Pressure-velocity coupling on one cell: rows pressure pair, cols cell
// velocity [u_x | u_y]:  -(p, div v)_K + sum_F <pbar, v.n>_F.
Eigen::MatrixXd divergence_blocks(const Mesh2D& mesh, const FormsContext& ctx,
                                  int cell);

// Slip penalty on an interface face over trace dofs:
//   alpha mu kappa^{-1/2} <t(ubar), t(vbar)>_F with t the tangential projector.
Eigen::MatrixXd interface_bjs_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int face);

// Interface pressure/trace-velocity coupling: rows pbar of region r, cols
// trace velocity:  -<pbar, vbar.n_r>_F with n_r outward from region r's cell.
Eigen::MatrixXd interface_pressure_block(const Mesh2D& mesh, const FormsContext& ctx,
                                         int face, Region r);

// Weighted face mass with pointwise weight: entry int_F w(x) psi_i psi_j ds.
Eigen::MatrixXd weighted_face_mass(const Mesh2D& mesh, const FormsContext& ctx,
                                   int face,
                                   const std::function<double(const Eigen::Vector2d&)>& w);

// Pressure-norm block, top region: (2mu)^{-1}(p,q)_K + (2 mu eta)^{-1} h_K <pbar,qbar>_dK.
Eigen::MatrixXd qs_inner_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell);

// Pressure-norm block, bottom region:
//   mu^{-1} kappa (grad p, grad q)_K + mu^{-1} kappa eta / h_K <(p-pbar),(q-qbar)>_dK.
Eigen::MatrixXd qd_inner_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell);

// Interior-penalty diffusion block for the porous pressure:
// qd_inner + consistency terms
//   - mu^{-1} kappa <grad p . n, q-qbar>_dK - mu^{-1} kappa <grad q . n, p-pbar>_dK.
Eigen::MatrixXd tilde_dh_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell);

// Per-cell trace roughness over the 6*nface trace dofs of a cell:
//   h_K^{-1} || vbar - mean_dK(vbar) ||^2_dK  (componentwise boundary mean).
Eigen::MatrixXd facet_seminorm_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                           int cell);

// Cell averages of discrete fields (coefficient vectors in the layouts above).
Eigen::Vector2d cell_mean_velocity(const Mesh2D& mesh, const FormsContext& ctx,
                                   int cell, const Eigen::VectorXd& vel_coeffs);
double cell_mean_pressure(const Mesh2D& mesh, const FormsContext& ctx, int cell,
                          const Eigen::VectorXd& pres_coeffs);

// Load integrals int_K f . test over one cell, in the cell layouts.
Eigen::VectorXd integrate_velocity_source(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f);
Eigen::VectorXd integrate_pressure_source(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<double(const Eigen::Vector2d&)>& f);

// Face load integral int_F g psi_i ds (physical measure).
Eigen::VectorXd integrate_face_scalar(
    const Mesh2D& mesh, const FormsContext& ctx, int face,
    const std::function<double(const Eigen::Vector2d&)>& g);

// L2 projections onto the discrete spaces; the orthonormal reference bases
// make the coefficients plain reference-rule integrals.
Eigen::VectorXd project_face_scalar(
    const Mesh2D& mesh, const FormsContext& ctx, int face,
    const std::function<double(const Eigen::Vector2d&)>& g);
Eigen::VectorXd project_cell_velocity(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f);
Eigen::VectorXd project_cell_pressure(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<double(const Eigen::Vector2d&)>& f);

}  // namespace sdhdg

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "sdhdg/assembly.hpp"
#include "sdhdg/condense.hpp"

namespace sdhdg {

// P: condensed Riesz-map blocks of the weighted norms.
// Phat: same structure with the norm forms replaced by the stabilized
// diffusion forms (viscous block and interior-penalty porous-pressure block).
enum class PrecondVariant { P, Phat };

// Exact: sparse Cholesky per block. Inexact: a fixed number of symmetric
// Gauss-Seidel sweeps for the two condensed blocks; the top-region trace
// pressure block is face-diagonal and always solved exactly.
enum class PrecondMode { Exact, Inexact };

// Block-diagonal symmetric positive definite operator on the facet unknowns,
// segments [trace velocity | top trace pressure | bottom trace pressure].
class FacetPreconditioner {
 public:
  FacetPreconditioner(Eigen::SparseMatrix<double> Su, Eigen::SparseMatrix<double> Sps,
                      Eigen::SparseMatrix<double> Spd, Eigen::VectorXd kernel,
                      PrecondMode mode, int sweeps);

  int size() const { return nu_ + nps_ + npd_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;          // S x
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& r) const;  // blockwise solve
  // Removes the component along the pressure-constant kernel, orthogonally in
  // the S inner product; idempotent.
  Eigen::VectorXd project_kernel(const Eigen::VectorXd& x) const;

  const Eigen::VectorXd& kernel() const { return kernel_; }
  const Eigen::SparseMatrix<double>& block_u() const { return Su_; }
  const Eigen::SparseMatrix<double>& block_ps() const { return Sps_; }
  const Eigen::SparseMatrix<double>& block_pd() const { return Spd_; }
  Eigen::SparseMatrix<double> matrix() const;  // assembled block diagonal

 private:
  int nu_, nps_, npd_;
  Eigen::SparseMatrix<double> Su_, Sps_, Spd_;
  PrecondMode mode_;
  int sweeps_;
  std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> chol_u_, chol_ps_,
      chol_pd_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> row_u_, row_pd_;  // for the sweeps
  Eigen::VectorXd kernel_, Skernel_;
  double kernel_norm2_ = 0.0;
};

FacetPreconditioner build_precond(const Mesh2D& mesh, const FormsContext& ctx,
                                  const PhysicalParams& params, const DofMap& dofs,
                                  PrecondVariant variant,
                                  PrecondMode mode = PrecondMode::Exact,
                                  int sweeps = 5);

// Condensed facet blocks without any factorization. Spectral diagnostics use
// these directly; the Phat velocity block can be indefinite for small penalty
// and would make FacetPreconditioner construction fail.
struct PrecondBlocks {
  Eigen::SparseMatrix<double> Su, Sps, Spd;
  Eigen::VectorXd kernel;
  Eigen::SparseMatrix<double> matrix() const;  // assembled block diagonal
};

PrecondBlocks precond_blocks(const Mesh2D& mesh, const FormsContext& ctx,
                             const PhysicalParams& params, const DofMap& dofs,
                             PrecondVariant variant);

// One auxiliary cell/trace subsystem: an SPD form over the cell dofs of a
// single field plus one trace field, ready for static condensation. Trace ids
// are positions within that trace segment.
struct AuxiliaryBlock {
  Eigen::SparseMatrix<double> matrix;  // stacked cell dofs, then the trace segment
  int ncell = 0;                       // number of stacked cell dofs
  std::vector<CellSlice> slices;
};

enum class StokesBlockForm { InnerProduct, DiscreteForm };
enum class DarcyBlockForm { InnerProduct, IpDiffusion };

// Viscous subsystem over top-region cells (cell velocity plus trace velocity);
// optionally adds the interface slip penalty.
AuxiliaryBlock stokes_velocity_block(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& params, const DofMap& dofs,
                                     StokesBlockForm form, bool interface_term);

// Porous pressure subsystem over bottom-region cells (cell pressure plus trace
// pressure); optionally adds the interface dual weight.
AuxiliaryBlock darcy_pressure_block(const Mesh2D& mesh, const FormsContext& ctx,
                                    const PhysicalParams& params, const DofMap& dofs,
                                    DarcyBlockForm form, bool interface_term);

// Facet Schur complement of an SPD auxiliary block.
Eigen::SparseMatrix<double> condense_spd_block(const AuxiliaryBlock& blk);

}  // namespace sdhdg

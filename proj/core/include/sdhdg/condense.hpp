#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "sdhdg/assembly.hpp"

namespace sdhdg {

// Static condensation of a two-by-two block system
//   [A11 A21^T; A21 A22] (x, xbar) = (f, fbar)
// where A11 is block diagonal over cells. Produces the facet Schur complement
// S = A22 - A21 A11^{-1} A21^T, caches the per-cell factorizations, and
// recovers cell unknowns from a facet solution.
class CondensedSystem {
 public:
  // `spd` selects Cholesky for the cell blocks (valid for positive definite
  // forms); otherwise partial-pivot LU.
  CondensedSystem(const Eigen::SparseMatrix<double>& A, int ncell,
                  const std::vector<CellSlice>& slices, bool spd = false);

  const Eigen::SparseMatrix<double>& schur() const { return S_; }
  int facet_size() const { return nfacet_; }

  // fbar - A21 A11^{-1} f for a full free-dof right-hand side.
  Eigen::VectorXd reduce_rhs(const Eigen::VectorXd& rhs) const;

  // Full free-dof vector (cells recovered, facet part copied).
  Eigen::VectorXd recover(const Eigen::VectorXd& rhs, const Eigen::VectorXd& xbar) const;

  // A11^{-1} applied blockwise to a cell-dof vector (padded full vector in/out).
  Eigen::VectorXd local_solve(const Eigen::VectorXd& cell_rhs) const;

 private:
  struct CellFactor {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::MatrixXd C;  // facet x cell coupling
    int offset = 0, size = 0;
    std::vector<int> facet;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b, bool spd) const {
      return spd ? llt.solve(b).eval() : lu.solve(b).eval();
    }
  };
  int ncell_ = 0, nfacet_ = 0;
  bool spd_ = false;
  std::vector<CellFactor> cells_;
  Eigen::SparseMatrix<double> S_;
};

}  // namespace sdhdg

#include "sdhdg/condense.hpp"

#include <stdexcept>
#include <unordered_map>

namespace sdhdg {

CondensedSystem::CondensedSystem(const Eigen::SparseMatrix<double>& A, int ncell,
                                 const std::vector<CellSlice>& slices, bool spd)
    : ncell_(ncell), nfacet_(static_cast<int>(A.rows()) - ncell), spd_(spd) {
  std::vector<Eigen::Triplet<double>> strips;

  // Facet-facet part of A.
  for (int k = ncell_; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.row() >= ncell_)
        strips.emplace_back(static_cast<int>(it.row()) - ncell_,
                            static_cast<int>(it.col()) - ncell_, it.value());

  cells_.reserve(slices.size());
  for (const CellSlice& s : slices) {
    CellFactor cf;
    cf.offset = s.offset;
    cf.size = s.size;
    cf.facet = s.facet;
    const int nf = static_cast<int>(s.facet.size());
    Eigen::MatrixXd A11 = Eigen::MatrixXd::Zero(s.size, s.size);
    cf.C = Eigen::MatrixXd::Zero(nf, s.size);
    std::unordered_map<int, int> facet_local;
    facet_local.reserve(s.facet.size());
    for (int i = 0; i < nf; ++i) facet_local[s.facet[i]] = i;

    for (int j = 0; j < s.size; ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, s.offset + j); it; ++it) {
        const int r = static_cast<int>(it.row());
        if (r >= s.offset && r < s.offset + s.size) {
          A11(r - s.offset, j) = it.value();
        } else if (r >= ncell_) {
          const auto pos = facet_local.find(r - ncell_);
          if (pos == facet_local.end())
            throw std::runtime_error("condense: coupling outside the cell's facet set");
          cf.C(pos->second, j) = it.value();
        } else {
          throw std::runtime_error("condense: cell blocks overlap");
        }
      }

    if (spd_) {
      cf.llt.compute(A11);
      if (cf.llt.info() != Eigen::Success)
        throw std::runtime_error("condense: cell block not positive definite");
    } else {
      cf.lu.compute(A11);
    }
    // S -= C A11^{-1} C^T
    const Eigen::MatrixXd X = cf.solve(cf.C.transpose(), spd_);
    const Eigen::MatrixXd D = cf.C * X;
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nf; ++j)
        if (D(i, j) != 0.0) strips.emplace_back(s.facet[i], s.facet[j], -D(i, j));
    cells_.push_back(std::move(cf));
  }

  S_.resize(nfacet_, nfacet_);
  S_.setFromTriplets(strips.begin(), strips.end());
  S_.makeCompressed();
}

Eigen::VectorXd CondensedSystem::reduce_rhs(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd fbar = rhs.tail(nfacet_);
  for (const CellFactor& cf : cells_) {
    const Eigen::VectorXd y = cf.solve(rhs.segment(cf.offset, cf.size), spd_);
    const Eigen::VectorXd corr = cf.C * y;
    for (std::size_t i = 0; i < cf.facet.size(); ++i) fbar[cf.facet[i]] -= corr[i];
  }
  return fbar;
}

Eigen::VectorXd CondensedSystem::recover(const Eigen::VectorXd& rhs,
                                         const Eigen::VectorXd& xbar) const {
  Eigen::VectorXd x(ncell_ + nfacet_);
  x.tail(nfacet_) = xbar;
  for (const CellFactor& cf : cells_) {
    Eigen::VectorXd local = rhs.segment(cf.offset, cf.size);
    Eigen::VectorXd xf(cf.facet.size());
    for (std::size_t i = 0; i < cf.facet.size(); ++i) xf[i] = xbar[cf.facet[i]];
    local.noalias() -= cf.C.transpose() * xf;
    x.segment(cf.offset, cf.size) = cf.solve(local, spd_);
  }
  return x;
}

Eigen::VectorXd CondensedSystem::local_solve(const Eigen::VectorXd& cell_rhs) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cell_rhs.size());
  for (const CellFactor& cf : cells_)
    x.segment(cf.offset, cf.size) =
        cf.solve(cell_rhs.segment(cf.offset, cf.size), spd_);
  return x;
}

}  // namespace sdhdg

#include "sdhdg/precond.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sdhdg {

namespace {

// Symmetric Gauss-Seidel sweeps for M x = b with zero start; a fixed linear
// symmetric positive definite operation.
Eigen::VectorXd sgs_sweeps(const Eigen::SparseMatrix<double, Eigen::RowMajor>& M,
                           const Eigen::VectorXd& b, int sweeps) {
  const int n = static_cast<int>(M.rows());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < sweeps; ++s) {
    for (int i = 0; i < n; ++i) {
      double sum = b[i], diag = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(M, i); it;
           ++it) {
        if (it.col() == i)
          diag = it.value();
        else
          sum -= it.value() * x[it.col()];
      }
      x[i] = sum / diag;
    }
    for (int i = n - 1; i >= 0; --i) {
      double sum = b[i], diag = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(M, i); it;
           ++it) {
        if (it.col() == i)
          diag = it.value();
        else
          sum -= it.value() * x[it.col()];
      }
      x[i] = sum / diag;
    }
  }
  return x;
}

}  // namespace

FacetPreconditioner::FacetPreconditioner(Eigen::SparseMatrix<double> Su,
                                         Eigen::SparseMatrix<double> Sps,
                                         Eigen::SparseMatrix<double> Spd,
                                         Eigen::VectorXd kernel, PrecondMode mode,
                                         int sweeps)
    : nu_(static_cast<int>(Su.rows())),
      nps_(static_cast<int>(Sps.rows())),
      npd_(static_cast<int>(Spd.rows())),
      Su_(std::move(Su)),
      Sps_(std::move(Sps)),
      Spd_(std::move(Spd)),
      mode_(mode),
      sweeps_(sweeps),
      kernel_(std::move(kernel)) {
  chol_ps_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(Sps_);
  if (chol_ps_->info() != Eigen::Success)
    throw std::runtime_error("precond: top trace-pressure block not positive definite");
  if (mode_ == PrecondMode::Exact) {
    chol_u_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(Su_);
    if (chol_u_->info() != Eigen::Success)
      throw std::runtime_error("precond: trace-velocity block not positive definite");
    chol_pd_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(Spd_);
    if (chol_pd_->info() != Eigen::Success)
      throw std::runtime_error(
          "precond: bottom trace-pressure block not positive definite");
  } else {
    row_u_ = Su_;
    row_pd_ = Spd_;
  }
  Skernel_ = apply(kernel_);
  kernel_norm2_ = kernel_.dot(Skernel_);
}

Eigen::VectorXd FacetPreconditioner::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(size());
  y.head(nu_) = Su_ * x.head(nu_);
  y.segment(nu_, nps_) = Sps_ * x.segment(nu_, nps_);
  y.tail(npd_) = Spd_ * x.tail(npd_);
  return y;
}

Eigen::VectorXd FacetPreconditioner::apply_inverse(const Eigen::VectorXd& r) const {
  Eigen::VectorXd y(size());
  if (mode_ == PrecondMode::Exact) {
    y.head(nu_) = chol_u_->solve(r.head(nu_));
    y.tail(npd_) = chol_pd_->solve(r.tail(npd_));
  } else {
    y.head(nu_) = sgs_sweeps(row_u_, r.head(nu_), sweeps_);
    y.tail(npd_) = sgs_sweeps(row_pd_, r.tail(npd_), sweeps_);
  }
  y.segment(nu_, nps_) = chol_ps_->solve(r.segment(nu_, nps_));
  return y;
}

Eigen::VectorXd FacetPreconditioner::project_kernel(const Eigen::VectorXd& x) const {
  return x - kernel_ * (Skernel_.dot(x) / kernel_norm2_);
}

Eigen::SparseMatrix<double> FacetPreconditioner::matrix() const {
  std::vector<Eigen::Triplet<double>> trips;
  auto append = [&](const Eigen::SparseMatrix<double>& B, int off) {
    for (int k = 0; k < B.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()) + off,
                           static_cast<int>(it.col()) + off, it.value());
  };
  append(Su_, 0);
  append(Sps_, nu_);
  append(Spd_, nu_ + nps_);
  Eigen::SparseMatrix<double> S(size(), size());
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

AuxiliaryBlock stokes_velocity_block(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& params, const DofMap& dofs,
                                     StokesBlockForm form, bool interface_term) {
  const int m = dofs.nface;
  std::vector<int> cells;
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cell_region[c] == Region::Stokes) cells.push_back(c);
  const int nvel2 = 2 * dofs.nvel;
  const int total = static_cast<int>(cells.size()) * nvel2;

  // Position of a trace-velocity dof within the trace-velocity segment, or -1.
  auto upos = [&](int face, int j) {
    return dofs.facet_position(dofs.ubar_offset[face] + j);
  };

  AuxiliaryBlock blk;
  blk.ncell = total;
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const int c = cells[ci];
    const Eigen::MatrixXd M = (form == StokesBlockForm::InnerProduct)
                                  ? vs_inner_cell_matrix(mesh, ctx, params, c)
                                  : stokes_cell_matrix(mesh, ctx, params, c);
    CellSlice s;
    s.offset = static_cast<int>(ci) * nvel2;
    s.size = nvel2;
    // Element layout rows/cols -> mini ids (cell part then segment positions).
    std::vector<int> ids(nvel2 + 6 * m, -1);
    for (int j = 0; j < nvel2; ++j) ids[j] = s.offset + j;
    for (int f = 0; f < 3; ++f) {
      const int face = mesh.cell_faces[c][f];
      for (int j = 0; j < 2 * m; ++j) {
        const int pos = upos(face, j);
        if (pos >= 0) {
          ids[nvel2 + f * 2 * m + j] = total + pos;
          s.facet.push_back(pos);
        }
      }
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        if (ids[i] >= 0 && ids[j] >= 0 && M(i, j) != 0.0)
          trips.emplace_back(ids[i], ids[j], M(i, j));
    blk.slices.push_back(std::move(s));
  }
  if (interface_term) {
    for (int f = 0; f < mesh.num_faces(); ++f) {
      if (mesh.faces[f].cls != FaceClass::Interface) continue;
      const Eigen::MatrixXd M = interface_bjs_matrix(mesh, ctx, params, f);
      for (int i = 0; i < 2 * m; ++i)
        for (int j = 0; j < 2 * m; ++j)
          if (M(i, j) != 0.0)
            trips.emplace_back(total + upos(f, i), total + upos(f, j), M(i, j));
    }
  }
  blk.matrix.resize(total + dofs.ubar_free, total + dofs.ubar_free);
  blk.matrix.setFromTriplets(trips.begin(), trips.end());
  return blk;
}

AuxiliaryBlock darcy_pressure_block(const Mesh2D& mesh, const FormsContext& ctx,
                                    const PhysicalParams& params, const DofMap& dofs,
                                    DarcyBlockForm form, bool interface_term) {
  const int m = dofs.nface;
  std::vector<int> cells;
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cell_region[c] == Region::Darcy) cells.push_back(c);
  const int np = dofs.npres;
  const int total = static_cast<int>(cells.size()) * np;
  auto dpos = [&](int face, int j) {
    return dofs.facet_position(dofs.pbar_d_offset[face] + j) - dofs.ubar_free -
           dofs.pbar_s_count;
  };

  AuxiliaryBlock blk;
  blk.ncell = total;
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const int c = cells[ci];
    const Eigen::MatrixXd M = (form == DarcyBlockForm::InnerProduct)
                                  ? qd_inner_cell_matrix(mesh, ctx, params, c)
                                  : tilde_dh_cell_matrix(mesh, ctx, params, c);
    CellSlice s;
    s.offset = static_cast<int>(ci) * np;
    s.size = np;
    std::vector<int> ids(np + 3 * m);
    for (int j = 0; j < np; ++j) ids[j] = s.offset + j;
    for (int f = 0; f < 3; ++f) {
      const int face = mesh.cell_faces[c][f];
      for (int j = 0; j < m; ++j) {
        const int pos = dpos(face, j);
        ids[np + f * m + j] = total + pos;
        s.facet.push_back(pos);
      }
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        if (M(i, j) != 0.0) trips.emplace_back(ids[i], ids[j], M(i, j));
    blk.slices.push_back(std::move(s));
  }
  if (interface_term) {
    for (int f = 0; f < mesh.num_faces(); ++f) {
      if (mesh.faces[f].cls != FaceClass::Interface) continue;
      const Eigen::MatrixXd M =
          weighted_face_mass(mesh, ctx, f, [&](const Eigen::Vector2d& x) {
            return std::sqrt(params.kappa_at(x)) / (params.alpha * params.mu);
          });
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (M(i, j) != 0.0)
            trips.emplace_back(total + dpos(f, i), total + dpos(f, j), M(i, j));
    }
  }
  blk.matrix.resize(total + dofs.pbar_d_count, total + dofs.pbar_d_count);
  blk.matrix.setFromTriplets(trips.begin(), trips.end());
  return blk;
}

Eigen::SparseMatrix<double> condense_spd_block(const AuxiliaryBlock& blk) {
  return CondensedSystem(blk.matrix, blk.ncell, blk.slices, /*spd=*/true).schur();
}

Eigen::SparseMatrix<double> PrecondBlocks::matrix() const {
  const int nu = static_cast<int>(Su.rows());
  const int nps = static_cast<int>(Sps.rows());
  const int n = nu + nps + static_cast<int>(Spd.rows());
  std::vector<Eigen::Triplet<double>> trips;
  auto append = [&](const Eigen::SparseMatrix<double>& B, int off) {
    for (int k = 0; k < B.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()) + off,
                           static_cast<int>(it.col()) + off, it.value());
  };
  append(Su, 0);
  append(Sps, nu);
  append(Spd, nu + nps);
  Eigen::SparseMatrix<double> S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

PrecondBlocks precond_blocks(const Mesh2D& mesh, const FormsContext& ctx,
                             const PhysicalParams& params, const DofMap& dofs,
                             PrecondVariant variant) {
  const int m = dofs.nface;
  PrecondBlocks pb;

  pb.Su = condense_spd_block(stokes_velocity_block(
      mesh, ctx, params, dofs,
      variant == PrecondVariant::P ? StokesBlockForm::InnerProduct
                                   : StokesBlockForm::DiscreteForm,
      /*interface_term=*/true));

  // Top trace pressure block: (2 mu eta)^{-1} h_K face masses; already facet-only.
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_region[c] != Region::Stokes) continue;
    const Eigen::MatrixXd M = qs_inner_cell_matrix(mesh, ctx, params, c);
    for (int f = 0; f < 3; ++f) {
      const int face = mesh.cell_faces[c][f];
      const int base = dofs.facet_position(dofs.pbar_s_offset[face]) - dofs.ubar_free;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double v = M(dofs.npres + f * m + i, dofs.npres + f * m + j);
          if (v != 0.0) trips.emplace_back(base + i, base + j, v);
        }
    }
  }
  pb.Sps.resize(dofs.pbar_s_count, dofs.pbar_s_count);
  pb.Sps.setFromTriplets(trips.begin(), trips.end());

  pb.Spd = condense_spd_block(darcy_pressure_block(
      mesh, ctx, params, dofs,
      variant == PrecondVariant::P ? DarcyBlockForm::InnerProduct
                                   : DarcyBlockForm::IpDiffusion,
      /*interface_term=*/true));

  // Facet kernel: zero trace velocity, constant-one trace pressures.
  const Eigen::VectorXd face_one =
      ctx.face_basis.values(ctx.edge_rule.points.col(0)) * ctx.edge_rule.weights;
  pb.kernel = Eigen::VectorXd::Zero(dofs.free_facet_dofs);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (dofs.pbar_s_offset[f] >= 0)
      pb.kernel.segment(dofs.facet_position(dofs.pbar_s_offset[f]), m) = face_one;
    if (dofs.pbar_d_offset[f] >= 0)
      pb.kernel.segment(dofs.facet_position(dofs.pbar_d_offset[f]), m) = face_one;
  }
  return pb;
}

FacetPreconditioner build_precond(const Mesh2D& mesh, const FormsContext& ctx,
                                  const PhysicalParams& params, const DofMap& dofs,
                                  PrecondVariant variant, PrecondMode mode, int sweeps) {
  PrecondBlocks pb = precond_blocks(mesh, ctx, params, dofs, variant);
  try {
    return FacetPreconditioner(std::move(pb.Su), std::move(pb.Sps), std::move(pb.Spd),
                               std::move(pb.kernel), mode, sweeps);
  } catch (const std::runtime_error& e) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s (variant=%s k=%d eta=%g mu=%g kappa=%g alpha=%g)",
                  e.what(), variant == PrecondVariant::P ? "P" : "Phat", params.k,
                  params.penalty(), params.mu, params.kappa, params.alpha);
    throw std::runtime_error(buf);
  }
}

}  // namespace sdhdg

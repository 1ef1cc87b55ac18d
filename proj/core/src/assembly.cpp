#include "sdhdg/assembly.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace sdhdg {

namespace {

std::vector<int> velocity_pair_ids(const Mesh2D& mesh, const DofMap& d, int cell) {
  std::vector<int> ids;
  ids.reserve(2 * d.nvel + 6 * d.nface);
  for (int j = 0; j < 2 * d.nvel; ++j) ids.push_back(d.cell_offset[cell] + j);
  for (int f = 0; f < 3; ++f) {
    const int face = mesh.cell_faces[cell][f];
    const int off = d.ubar_offset[face];
    if (off < 0) throw std::runtime_error("velocity_pair_ids: face without trace dofs");
    for (int j = 0; j < 2 * d.nface; ++j) ids.push_back(off + j);
  }
  return ids;
}

std::vector<int> pressure_pair_ids(const Mesh2D& mesh, const DofMap& d, int cell,
                                   Region r) {
  std::vector<int> ids;
  ids.reserve(d.npres + 3 * d.nface);
  for (int j = 0; j < d.npres; ++j)
    ids.push_back(d.cell_offset[cell] + 2 * d.nvel + j);
  for (int f = 0; f < 3; ++f) {
    const int face = mesh.cell_faces[cell][f];
    const int off = (r == Region::Stokes) ? d.pbar_s_offset[face] : d.pbar_d_offset[face];
    if (off < 0) throw std::runtime_error("pressure_pair_ids: face without trace dofs");
    for (int j = 0; j < d.nface; ++j) ids.push_back(off + j);
  }
  return ids;
}

std::vector<int> face_ubar_ids(const DofMap& d, int face) {
  std::vector<int> ids(2 * d.nface);
  for (int j = 0; j < 2 * d.nface; ++j) ids[j] = d.ubar_offset[face] + j;
  return ids;
}

std::vector<int> face_pbar_ids(const DofMap& d, int face, Region r) {
  const int off = (r == Region::Stokes) ? d.pbar_s_offset[face] : d.pbar_d_offset[face];
  std::vector<int> ids(d.nface);
  for (int j = 0; j < d.nface; ++j) ids[j] = off + j;
  return ids;
}

class Assembler {
 public:
  explicit Assembler(const DofMap& d) : dofs_(d), rhs_(Eigen::VectorXd::Zero(d.total_dofs)) {}

  void add(const std::vector<int>& rows, const std::vector<int>& cols,
           const Eigen::MatrixXd& M) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (M(i, j) != 0.0)
          trips_.emplace_back(rows[i], cols[j], M(i, j));
  }
  void add_sym(const std::vector<int>& ids, const Eigen::MatrixXd& M) { add(ids, ids, M); }
  void add_coupling(const std::vector<int>& rows, const std::vector<int>& cols,
                    const Eigen::MatrixXd& M) {
    add(rows, cols, M);
    add(cols, rows, M.transpose());
  }
  void add_rhs(const std::vector<int>& ids, const Eigen::VectorXd& v) {
    for (std::size_t i = 0; i < ids.size(); ++i) rhs_[ids[i]] += v[i];
  }

  // Eliminate constrained dofs by substitution of the prescribed values.
  void reduce(const Eigen::VectorXd& prescribed, Eigen::SparseMatrix<double>& A,
              Eigen::VectorXd& rhs) const {
    const int nfree = dofs_.num_free();
    std::vector<Eigen::Triplet<double>> keep;
    keep.reserve(trips_.size());
    rhs.resize(nfree);
    for (int i = 0; i < nfree; ++i) rhs[i] = rhs_[dofs_.free_to_full[i]];
    for (const auto& t : trips_) {
      const int r = dofs_.full_to_free[t.row()];
      const int c = dofs_.full_to_free[t.col()];
      if (r < 0) continue;
      if (c < 0)
        rhs[r] -= t.value() * prescribed[t.col()];
      else
        keep.emplace_back(r, c, t.value());
    }
    A.resize(nfree, nfree);
    A.setFromTriplets(keep.begin(), keep.end());
    A.makeCompressed();
  }

 private:
  const DofMap& dofs_;
  std::vector<Eigen::Triplet<double>> trips_;
  Eigen::VectorXd rhs_;
};

Eigen::VectorXd dirichlet_values(const Mesh2D& mesh, const FormsContext& ctx,
                                 const DofMap& d, const ProblemData& data) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d.total_dofs);
  if (!data.dirichlet_s) return g;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.faces[f].cls != FaceClass::GammaS) continue;
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXd coeffs = project_face_scalar(
          mesh, ctx, f, [&](const Eigen::Vector2d& x) { return data.dirichlet_s(x)[c]; });
      g.segment(d.ubar_offset[f] + c * d.nface, d.nface) = coeffs;
    }
  }
  return g;
}

Eigen::VectorXd kernel_vector(const Mesh2D& mesh, const FormsContext& ctx,
                              const DofMap& d) {
  // Coefficients of the constant 1 in each pressure space.
  Eigen::VectorXd full = Eigen::VectorXd::Zero(d.total_dofs);
  const Eigen::VectorXd cell_one =
      ctx.pres_values * ctx.cell_rule.weights;  // reference L2 projection of 1
  const Eigen::VectorXd face_one = ctx.face_basis.values(ctx.edge_rule.points.col(0)) *
                                   ctx.edge_rule.weights;
  for (int c = 0; c < mesh.num_cells(); ++c)
    full.segment(d.cell_offset[c] + 2 * d.nvel, d.npres) = cell_one;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (d.pbar_s_offset[f] >= 0)
      full.segment(d.pbar_s_offset[f], d.nface) = face_one;
    if (d.pbar_d_offset[f] >= 0)
      full.segment(d.pbar_d_offset[f], d.nface) = face_one;
  }
  Eigen::VectorXd z(d.num_free());
  for (int i = 0; i < d.num_free(); ++i) z[i] = full[d.free_to_full[i]];
  return z;
}

std::vector<CellSlice> build_slices(const Mesh2D& mesh, const DofMap& d) {
  std::vector<CellSlice> slices(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellSlice& s = slices[c];
    s.offset = d.cell_offset[c];
    s.size = d.cell_size();
    const Region r = mesh.cell_region[c];
    if (r == Region::Stokes) {
      for (int f = 0; f < 3; ++f) {
        const int face = mesh.cell_faces[c][f];
        for (int j = 0; j < 2 * d.nface; ++j) {
          const int pos = d.facet_position(d.ubar_offset[face] + j);
          if (pos >= 0) s.facet.push_back(pos);
        }
      }
      for (int f = 0; f < 3; ++f) {
        const int face = mesh.cell_faces[c][f];
        for (int j = 0; j < d.nface; ++j)
          s.facet.push_back(d.facet_position(d.pbar_s_offset[face] + j));
      }
    } else {
      for (int f = 0; f < 3; ++f) {
        const int face = mesh.cell_faces[c][f];
        for (int j = 0; j < d.nface; ++j)
          s.facet.push_back(d.facet_position(d.pbar_d_offset[face] + j));
      }
    }
  }
  return slices;
}

}  // namespace

BlockSystem assemble_system(const Mesh2D& mesh, const FormsContext& ctx,
                            const PhysicalParams& params, const ProblemData& data,
                            const DofMap& dofs) {
  Assembler as(dofs);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_region[c] == Region::Stokes) {
      const auto vids = velocity_pair_ids(mesh, dofs, c);
      as.add_sym(vids, stokes_cell_matrix(mesh, ctx, params, c));
      std::vector<int> cell_v(vids.begin(), vids.begin() + 2 * dofs.nvel);
      as.add_coupling(pressure_pair_ids(mesh, dofs, c, Region::Stokes), cell_v,
                      divergence_blocks(mesh, ctx, c));
      if (data.f_s)
        as.add_rhs(cell_v, integrate_velocity_source(mesh, ctx, c, data.f_s));
    } else {
      std::vector<int> cell_v(2 * dofs.nvel);
      for (int j = 0; j < 2 * dofs.nvel; ++j) cell_v[j] = dofs.cell_offset[c] + j;
      as.add_sym(cell_v, darcy_cell_matrix(mesh, ctx, params, c));
      as.add_coupling(pressure_pair_ids(mesh, dofs, c, Region::Darcy), cell_v,
                      divergence_blocks(mesh, ctx, c));
      if (data.f_d) {
        std::vector<int> cell_p(dofs.npres);
        for (int j = 0; j < dofs.npres; ++j)
          cell_p[j] = dofs.cell_offset[c] + 2 * dofs.nvel + j;
        as.add_rhs(cell_p, integrate_pressure_source(mesh, ctx, c, data.f_d));
      }
    }
  }

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (face.cls == FaceClass::Interface) {
      const auto uids = face_ubar_ids(dofs, f);
      as.add_sym(uids, interface_bjs_matrix(mesh, ctx, params, f));
      as.add_coupling(face_pbar_ids(dofs, f, Region::Stokes), uids,
                      interface_pressure_block(mesh, ctx, f, Region::Stokes));
      as.add_coupling(face_pbar_ids(dofs, f, Region::Darcy), uids,
                      interface_pressure_block(mesh, ctx, f, Region::Darcy));

      if (data.iface_normal_src || data.iface_tangent_src) {
        const Eigen::Vector2d n = mesh.outward_normal(f, face.cell[0]);
        const Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - n * n.transpose();
        for (int c = 0; c < 2; ++c) {
          const Eigen::VectorXd load = integrate_face_scalar(
              mesh, ctx, f, [&](const Eigen::Vector2d& x) {
                double v = 0.0;
                if (data.iface_normal_src) v += data.iface_normal_src(x) * n[c];
                if (data.iface_tangent_src) v += (proj * data.iface_tangent_src(x))[c];
                return -v;
              });
          std::vector<int> ids(dofs.nface);
          for (int j = 0; j < dofs.nface; ++j)
            ids[j] = dofs.ubar_offset[f] + c * dofs.nface + j;
          as.add_rhs(ids, load);
        }
      }
    } else if (face.cls == FaceClass::GammaS && data.dirichlet_s) {
      // Weak mass balance rows see the prescribed boundary flux.
      const Eigen::Vector2d n = mesh.outward_normal(f, face.cell[0]);
      as.add_rhs(face_pbar_ids(dofs, f, Region::Stokes),
                 integrate_face_scalar(mesh, ctx, f, [&](const Eigen::Vector2d& x) {
                   return data.dirichlet_s(x).dot(n);
                 }));
    } else if (face.cls == FaceClass::GammaD && data.darcy_flux) {
      as.add_rhs(face_pbar_ids(dofs, f, Region::Darcy),
                 integrate_face_scalar(mesh, ctx, f, data.darcy_flux));
    }
  }

  BlockSystem sys;
  sys.dofs = dofs;
  sys.ncell = dofs.total_cell_dofs;
  as.reduce(dirichlet_values(mesh, ctx, dofs, data), sys.A, sys.rhs);
  sys.slices = build_slices(mesh, dofs);
  sys.nullspace = kernel_vector(mesh, ctx, dofs);
  return sys;
}

NormParts assemble_norm_parts(const Mesh2D& mesh, const FormsContext& ctx,
                              const PhysicalParams& params, const DofMap& dofs) {
  Assembler vs(dofs), vd(dofs), vi(dofs), qs(dofs), qd(dofs), qi(dofs);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_region[c] == Region::Stokes) {
      vs.add_sym(velocity_pair_ids(mesh, dofs, c),
                 vs_inner_cell_matrix(mesh, ctx, params, c));
      qs.add_sym(pressure_pair_ids(mesh, dofs, c, Region::Stokes),
                 qs_inner_cell_matrix(mesh, ctx, params, c));
    } else {
      std::vector<int> cell_v(2 * dofs.nvel);
      for (int j = 0; j < 2 * dofs.nvel; ++j) cell_v[j] = dofs.cell_offset[c] + j;
      vd.add_sym(cell_v, darcy_cell_matrix(mesh, ctx, params, c));
      qd.add_sym(pressure_pair_ids(mesh, dofs, c, Region::Darcy),
                 qd_inner_cell_matrix(mesh, ctx, params, c));
    }
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.faces[f].cls != FaceClass::Interface) continue;
    vi.add_sym(face_ubar_ids(dofs, f), interface_bjs_matrix(mesh, ctx, params, f));
    // Dual weight on the porous trace pressure.
    qi.add_sym(face_pbar_ids(dofs, f, Region::Darcy),
               weighted_face_mass(mesh, ctx, f, [&](const Eigen::Vector2d& x) {
                 return std::sqrt(params.kappa_at(x)) / (params.alpha * params.mu);
               }));
  }
  NormParts p;
  Eigen::VectorXd dummy;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dofs.total_dofs);
  vs.reduce(zero, p.vel_s, dummy);
  vd.reduce(zero, p.vel_d, dummy);
  vi.reduce(zero, p.vel_iface, dummy);
  qs.reduce(zero, p.pres_s, dummy);
  qd.reduce(zero, p.pres_d, dummy);
  qi.reduce(zero, p.pres_iface, dummy);
  return p;
}

Eigen::SparseMatrix<double> assemble_norm_matrix(const Mesh2D& mesh,
                                                 const FormsContext& ctx,
                                                 const PhysicalParams& params,
                                                 const DofMap& dofs) {
  const NormParts p = assemble_norm_parts(mesh, ctx, params, dofs);
  Eigen::SparseMatrix<double> N =
      p.vel_s + p.vel_d + p.vel_iface + p.pres_s + p.pres_d + p.pres_iface;
  N.makeCompressed();
  return N;
}

void split_velocity_pressure(const Mesh2D& mesh, const DofMap& dofs,
                             std::vector<int>& velocity, std::vector<int>& pressure) {
  velocity.clear();
  pressure.clear();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int j = 0; j < 2 * dofs.nvel; ++j) velocity.push_back(dofs.cell_offset[c] + j);
    for (int j = 0; j < dofs.npres; ++j)
      pressure.push_back(dofs.cell_offset[c] + 2 * dofs.nvel + j);
  }
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (dofs.ubar_offset[f] >= 0)
      for (int j = 0; j < 2 * dofs.nface; ++j) {
        const int free = dofs.full_to_free[dofs.ubar_offset[f] + j];
        if (free >= 0) velocity.push_back(free);
      }
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (dofs.pbar_s_offset[f] >= 0)
      for (int j = 0; j < dofs.nface; ++j)
        pressure.push_back(dofs.full_to_free[dofs.pbar_s_offset[f] + j]);
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (dofs.pbar_d_offset[f] >= 0)
      for (int j = 0; j < dofs.nface; ++j)
        pressure.push_back(dofs.full_to_free[dofs.pbar_d_offset[f] + j]);
}

Eigen::SparseMatrix<double> assemble_facet_seminorm(const Mesh2D& mesh,
                                                    const FormsContext& ctx,
                                                    const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_region[c] != Region::Stokes) continue;
    const Eigen::MatrixXd M = facet_seminorm_cell_matrix(mesh, ctx, c);
    std::vector<int> pos;  // positions within the trace-velocity segment
    for (int f = 0; f < 3; ++f) {
      const int face = mesh.cell_faces[c][f];
      for (int j = 0; j < 2 * dofs.nface; ++j)
        pos.push_back(dofs.facet_position(dofs.ubar_offset[face] + j));
    }
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = 0; j < pos.size(); ++j)
        if (pos[i] >= 0 && pos[j] >= 0 && M(i, j) != 0.0)
          trips.emplace_back(pos[i], pos[j], M(i, j));
  }
  Eigen::SparseMatrix<double> S(dofs.ubar_free, dofs.ubar_free);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

double compatibility_residual(const BlockSystem& sys) {
  const double denom = sys.rhs.norm();
  if (denom == 0.0) return 0.0;
  return std::abs(sys.nullspace.dot(sys.rhs)) / denom;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      out << buf;
    }
}

Eigen::VectorXd project_exact(const Mesh2D& mesh, const FormsContext& ctx,
                              const DofMap& dofs, const ExactFields& exact) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(dofs.total_dofs);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Region r = mesh.cell_region[c];
    full.segment(dofs.cell_offset[c], 2 * dofs.nvel) = project_cell_velocity(
        mesh, ctx, c, [&](const Eigen::Vector2d& x) { return exact.velocity(x, r); });
    full.segment(dofs.cell_offset[c] + 2 * dofs.nvel, dofs.npres) = project_cell_pressure(
        mesh, ctx, c, [&](const Eigen::Vector2d& x) { return exact.pressure(x, r); });
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (dofs.ubar_offset[f] >= 0)
      for (int c = 0; c < 2; ++c)
        full.segment(dofs.ubar_offset[f] + c * dofs.nface, dofs.nface) =
            project_face_scalar(mesh, ctx, f, [&](const Eigen::Vector2d& x) {
              return exact.velocity(x, Region::Stokes)[c];
            });
    if (dofs.pbar_s_offset[f] >= 0)
      full.segment(dofs.pbar_s_offset[f], dofs.nface) =
          project_face_scalar(mesh, ctx, f, [&](const Eigen::Vector2d& x) {
            return exact.pressure(x, Region::Stokes);
          });
    if (dofs.pbar_d_offset[f] >= 0)
      full.segment(dofs.pbar_d_offset[f], dofs.nface) =
          project_face_scalar(mesh, ctx, f, [&](const Eigen::Vector2d& x) {
            return exact.pressure(x, Region::Darcy);
          });
  }
  Eigen::VectorXd free(dofs.num_free());
  for (int i = 0; i < dofs.num_free(); ++i) free[i] = full[dofs.free_to_full[i]];
  return free;
}

}  // namespace sdhdg

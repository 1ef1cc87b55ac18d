#include "sdhdg/dofmap.hpp"

#include <stdexcept>

namespace sdhdg {

DofMap build_dofmap(const Mesh2D& mesh, int k) {
  if (k < 1) throw std::invalid_argument("build_dofmap: k must be >= 1");
  DofMap d;
  d.k = k;
  d.nvel = (k + 1) * (k + 2) / 2;
  d.npres = k * (k + 1) / 2;
  d.nface = k + 1;

  d.cell_offset.resize(mesh.num_cells());
  int id = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    d.cell_offset[c] = id;
    id += d.cell_size();
  }
  d.total_cell_dofs = id;

  d.ubar_offset.assign(mesh.num_faces(), -1);
  d.pbar_s_offset.assign(mesh.num_faces(), -1);
  d.pbar_d_offset.assign(mesh.num_faces(), -1);
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face_on_region(f, Region::Stokes)) {
      d.ubar_offset[f] = id;
      id += 2 * d.nface;
    }
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face_on_region(f, Region::Stokes)) {
      d.pbar_s_offset[f] = id;
      id += d.nface;
    }
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face_on_region(f, Region::Darcy)) {
      d.pbar_d_offset[f] = id;
      id += d.nface;
    }
  d.total_dofs = id;

  d.constrained.assign(d.total_dofs, false);
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (mesh.faces[f].cls == FaceClass::GammaS)
      for (int j = 0; j < 2 * d.nface; ++j) d.constrained[d.ubar_offset[f] + j] = true;

  d.full_to_free.assign(d.total_dofs, -1);
  d.free_to_full.clear();
  for (int i = 0; i < d.total_dofs; ++i)
    if (!d.constrained[i]) {
      d.full_to_free[i] = static_cast<int>(d.free_to_full.size());
      d.free_to_full.push_back(i);
    }
  d.free_facet_dofs = static_cast<int>(d.free_to_full.size()) - d.total_cell_dofs;

  d.ubar_free = d.pbar_s_count = d.pbar_d_count = 0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (d.ubar_offset[f] >= 0 && mesh.faces[f].cls != FaceClass::GammaS)
      d.ubar_free += 2 * d.nface;
    if (d.pbar_s_offset[f] >= 0) d.pbar_s_count += d.nface;
    if (d.pbar_d_offset[f] >= 0) d.pbar_d_count += d.nface;
  }
  if (d.ubar_free + d.pbar_s_count + d.pbar_d_count != d.free_facet_dofs)
    throw std::runtime_error("build_dofmap: segment sizes inconsistent");
  return d;
}

}  // namespace sdhdg

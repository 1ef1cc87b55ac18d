#pragma once

#include <vector>

#include "sdhdg/mesh.hpp"

namespace sdhdg {

// Global numbering. Cell unknowns come first, cell-major, each cell holding
// [u_x modes | u_y modes | p modes]. Facet unknowns follow field-major then
// face-major: all trace velocities (faces of the top-region closure, [x|y]
// per face), then all top-region trace pressures, then all bottom-region
// trace pressures. Trace-velocity dofs on the outer top boundary are
// constrained (eliminated by substitution); everything else is free. Free
// dofs keep the full ordering.
struct DofMap {
  int k = 0;
  int nvel = 0, npres = 0, nface = 0;  // modes per entity

  std::vector<int> cell_offset;    // full id of each cell's first dof
  int total_cell_dofs = 0;

  std::vector<int> ubar_offset;    // per face; -1 if the face carries no trace velocity
  std::vector<int> pbar_s_offset;  // per face; -1 outside the top-region closure
  std::vector<int> pbar_d_offset;  // per face; -1 outside the bottom-region closure
  int total_dofs = 0;

  std::vector<bool> constrained;   // by full id
  std::vector<int> full_to_free;   // -1 for constrained dofs
  std::vector<int> free_to_full;

  int free_facet_dofs = 0;
  int ubar_free = 0, pbar_s_count = 0, pbar_d_count = 0;  // facet segment sizes

  int cell_size() const { return 2 * nvel + npres; }
  int num_free() const { return total_cell_dofs + free_facet_dofs; }

  // Free facet position (0-based within the facet block) or -1 if constrained.
  int facet_position(int full_id) const {
    const int f = full_to_free[full_id];
    return f < 0 ? -1 : f - total_cell_dofs;
  }
};

DofMap build_dofmap(const Mesh2D& mesh, int k);

}  // namespace sdhdg

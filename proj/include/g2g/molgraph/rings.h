//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_MOLGRAPH_RINGS_H_
#define G2G_MOLGRAPH_RINGS_H_

#include <vector>

#include "g2g/molgraph/molecule.h"

namespace g2g {

struct Ring {
  // Atoms in cyclic order.
  std::vector<int> atoms;
  // Bond indices of the cycle, ascending.
  std::vector<int> bonds;
};

/// Minimum cycle basis from Horton's candidate set, deterministic for a
/// given atom numbering. Its size is the cyclomatic number E - V + C.
std::vector<Ring> minimum_cycle_basis(const Molecule &mol);

}  // namespace g2g

#endif  // G2G_MOLGRAPH_RINGS_H_

//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TESTS_TEST_SUPPORT_H_
#define G2G_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "g2g/molgraph/molecule.h"

namespace g2g::testing {

/// Copy of `mol` whose atom i is placed at position perm[i]; bonds are
/// inserted in reverse to shuffle bond indices as well.
inline Molecule permute_atoms(const Molecule &mol, const std::vector<int> &perm) {
  int n = mol.num_atoms();
  std::vector<int> inverse(n);
  for (int i = 0; i < n; ++i)
    inverse[perm[i]] = i;
  Molecule out;
  for (int p = 0; p < n; ++p)
    out.add_atom(mol.atom(inverse[p]));
  for (int b = mol.num_bonds() - 1; b >= 0; --b) {
    const Bond &bd = mol.bond(b);
    out.add_bond(perm[bd.end], perm[bd.begin], bd.order);
  }
  return out;
}

/// Exhaustive isomorphism test over all atom bijections (small molecules).
inline bool brute_isomorphic(const Molecule &a, const Molecule &b) {
  int n = a.num_atoms();
  if (n != b.num_atoms() || a.num_bonds() != b.num_bonds())
    return false;
  std::set<std::tuple<int, int, int>> bonds_b;
  for (const Bond &bd: b.bonds()) {
    bonds_b.emplace(bd.begin, bd.end, static_cast<int>(bd.order));
    bonds_b.emplace(bd.end, bd.begin, static_cast<int>(bd.order));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      ok = a.atom(i) == b.atom(perm[i]);
    for (const Bond &bd: a.bonds()) {
      if (!ok)
        break;
      ok = bonds_b.count({ perm[bd.begin], perm[bd.end],
                           static_cast<int>(bd.order) })
           > 0;
    }
    if (ok)
      return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace g2g::testing

#endif  // G2G_TESTS_TEST_SUPPORT_H_

//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_ENCODER_FEATURES_H_
#define G2G_ENCODER_FEATURES_H_

#include <span>
#include <vector>

#include "g2g/molgraph/molecule.h"
#include "g2g/tensorcore/tape.h"

namespace g2g {

// Element one-hot over {C, N, O, S, P, F, Cl, Br, I}, formal charge one-hot
// over {-1, 0, +1} and heavy-atom degree one-hot over {0..5}.
inline constexpr int kAtomFeatureDim = 18;
// Bond order one-hot over {single, double, triple, aromatic}.
inline constexpr int kBondFeatureDim = 4;

/// Writes the feature row of `atom` into `row` (zeros elsewhere). Throws
/// DataError for elements or charges outside the table; degrees above 5
/// share the last slot.
void atom_feature_row(const Molecule &mol, int atom, Eigen::Ref<Mat> row);

int bond_feature_index(BondOrder order);

/// Disjoint union of molecular graphs laid out for message passing.
/// Directed edge 2k runs begin -> end of the k-th added bond, 2k + 1 the
/// reverse.
struct GraphBatch {
  // Row-major feature storage; see atom_features() / edge_features().
  std::vector<double> atom_data;
  std::vector<double> edge_data;
  std::vector<int> edge_src;
  std::vector<int> edge_dst;
  std::vector<int> edge_rev;
  std::vector<int> atom_owner;   // graph index of each atom
  std::vector<int> atom_offset;  // graphs + 1 entries
  std::vector<int> edge_offset;  // graphs + 1 entries

  GraphBatch() : atom_offset{ 0 }, edge_offset{ 0 } { }

  int graphs() const { return static_cast<int>(atom_offset.size()) - 1; }
  int atoms() const { return atom_offset.back(); }
  int edges() const { return edge_offset.back(); }

  Mat atom_features() const;  // atoms x kAtomFeatureDim
  Mat edge_features() const;  // directed edges x kBondFeatureDim

  /// Appends a molecule; returns its graph index.
  int add(const Molecule &mol);
  /// Appends a batch of molecules.
  void add_all(std::span<const Molecule *const> mols);
};

}  // namespace g2g

#endif  // G2G_ENCODER_FEATURES_H_

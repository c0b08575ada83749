//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/encoder/features.h"

#include <algorithm>
#include <array>
#include <string_view>

namespace g2g {
namespace {

constexpr std::array<std::string_view, 9> kElements = {
  "C", "N", "O", "S", "P", "F", "Cl", "Br", "I",
};

}  // namespace

void atom_feature_row(const Molecule &mol, int atom, Eigen::Ref<Mat> row) {
  row.setZero();
  const Atom &a = mol.atom(atom);
  auto it = std::find(kElements.begin(), kElements.end(), a.element);
  if (it == kElements.end())
    throw DataError("element " + a.element + " is outside the feature table");
  row(0, it - kElements.begin()) = 1;
  if (a.charge < -1 || a.charge > 1)
    throw DataError("formal charge " + std::to_string(a.charge)
                    + " is outside the feature table");
  row(0, 9 + a.charge + 1) = 1;
  row(0, 12 + std::min(mol.degree(atom), 5)) = 1;
}

int bond_feature_index(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
    return 0;
  case BondOrder::kDouble:
    return 1;
  case BondOrder::kTriple:
    return 2;
  case BondOrder::kAromatic:
    return 3;
  }
  return 0;
}

int GraphBatch::add(const Molecule &mol) {
  const int base = atoms();
  const int ebase = edges();
  const int n = mol.num_atoms();
  const int m = mol.num_bonds();
  Mat rows(n, kAtomFeatureDim);
  for (int a = 0; a < n; ++a) {
    atom_feature_row(mol, a, rows.row(a));
    atom_owner.push_back(graphs());
  }
  atom_data.insert(atom_data.end(), rows.data(), rows.data() + rows.size());
  for (int b = 0; b < m; ++b) {
    const Bond &bd = mol.bond(b);
    int e = ebase + 2 * b;
    std::array<double, kBondFeatureDim> f{};
    f[bond_feature_index(bd.order)] = 1;
    for (int copy = 0; copy < 2; ++copy)
      edge_data.insert(edge_data.end(), f.begin(), f.end());
    edge_src.push_back(base + bd.begin);
    edge_dst.push_back(base + bd.end);
    edge_rev.push_back(e + 1);
    edge_src.push_back(base + bd.end);
    edge_dst.push_back(base + bd.begin);
    edge_rev.push_back(e);
  }
  atom_offset.push_back(base + n);
  edge_offset.push_back(ebase + 2 * m);
  return graphs() - 1;
}

Mat GraphBatch::atom_features() const {
  return Eigen::Map<const Mat>(atom_data.data(), atoms(), kAtomFeatureDim);
}

Mat GraphBatch::edge_features() const {
  return Eigen::Map<const Mat>(edge_data.data(), edges(), kBondFeatureDim);
}

void GraphBatch::add_all(std::span<const Molecule *const> mols) {
  for (const Molecule *m: mols)
    add(*m);
}

}  // namespace g2g

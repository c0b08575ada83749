//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_JUNCTREE_VOCAB_H_
#define G2G_JUNCTREE_VOCAB_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "g2g/junctree/junction_tree.h"
#include "g2g/molgraph/molecule.h"

namespace g2g {

/// Ordered list of canonical cluster SMILES; position is the label.
class ClusterVocab {
public:
  ClusterVocab() = default;
  /// Entries must be distinct canonical SMILES.
  explicit ClusterVocab(std::vector<std::string> entries);

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<std::string> &entries() const { return entries_; }
  const std::string &smiles(int label) const { return entries_.at(label); }
  const Molecule &molecule(int label) const { return molecules_.at(label); }
  ClusterKind kind(int label) const { return kinds_.at(label); }

  /// Label of a canonical SMILES, or -1.
  int find(const std::string &smiles) const;

  /// Assigns labels to every node of a decomposed tree; throws DataError
  /// when a cluster is not in the vocabulary.
  void label_tree(const Molecule &mol, JunctionTree &tree) const;

private:
  std::vector<std::string> entries_;
  std::map<std::string, int> index_;
  std::vector<Molecule> molecules_;
  std::vector<ClusterKind> kinds_;
};

/// Canonical SMILES of a cluster of `mol`.
std::string cluster_smiles(const Molecule &mol, const Cluster &cluster);

/// Union of the canonical cluster SMILES of every decomposed molecule,
/// sorted lexicographically.
ClusterVocab build_vocab(std::span<const Molecule> corpus);

/// Decomposes and labels a molecule in one step.
JunctionTree labeled_tree(const Molecule &mol, const ClusterVocab &vocab);

void write_vocab(const ClusterVocab &vocab, const std::filesystem::path &path);
ClusterVocab read_vocab(const std::filesystem::path &path);

}  // namespace g2g

#endif  // G2G_JUNCTREE_VOCAB_H_

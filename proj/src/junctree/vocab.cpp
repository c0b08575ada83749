//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/junctree/vocab.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "g2g/molgraph/smiles.h"
#include "g2g/text_io.h"

namespace g2g {

ClusterVocab::ClusterVocab(std::vector<std::string> entries)
    : entries_(std::move(entries)) {
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(entries_[i], i).second)
      throw DataError("duplicate vocabulary entry '" + entries_[i] + "'");
    molecules_.push_back(parse_smiles(entries_[i]));
    kinds_.push_back(cluster_kind(molecules_.back()));
  }
}

int ClusterVocab::find(const std::string &smiles) const {
  auto it = index_.find(smiles);
  return it == index_.end() ? -1 : it->second;
}

void ClusterVocab::label_tree(const Molecule &mol, JunctionTree &tree) const {
  for (int i = 0; i < tree.size(); ++i) {
    std::string s = cluster_smiles(mol, tree.node(i));
    int label = find(s);
    if (label < 0)
      throw DataError("cluster '" + s + "' is not in the vocabulary");
    tree.mutable_node(i).label = label;
  }
}

std::string cluster_smiles(const Molecule &mol, const Cluster &cluster) {
  return write_smiles(cluster_molecule(mol, cluster));
}

ClusterVocab build_vocab(std::span<const Molecule> corpus) {
  std::set<std::string> seen;
  for (const Molecule &mol: corpus) {
    JunctionTree tree = decompose(mol);
    for (const Cluster &c: tree.nodes())
      seen.insert(cluster_smiles(mol, c));
  }
  return ClusterVocab(std::vector<std::string>(seen.begin(), seen.end()));
}

JunctionTree labeled_tree(const Molecule &mol, const ClusterVocab &vocab) {
  JunctionTree tree = decompose(mol);
  vocab.label_tree(mol, tree);
  return tree;
}

void write_vocab(const ClusterVocab &vocab,
                 const std::filesystem::path &path) {
  std::string text;
  for (const std::string &s: vocab.entries())
    text += s + '\n';
  write_file_atomic(path, text);
}

ClusterVocab read_vocab(const std::filesystem::path &path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      throw DataError("empty line " + std::to_string(entries.size() + 1)
                      + " in vocabulary " + path.string());
    entries.push_back(line);
  }
  if (entries.empty())
    throw DataError("empty vocabulary " + path.string());
  return ClusterVocab(std::move(entries));
}

}  // namespace g2g

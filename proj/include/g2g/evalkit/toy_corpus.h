//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_EVALKIT_TOY_CORPUS_H_
#define G2G_EVALKIT_TOY_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace g2g {

struct ToyCorpusOptions {
  int size = 500;
  std::uint64_t seed = 0;
  int max_heavy_atoms = 20;
  // Variants grown from each base molecule by one extra substituent.
  int variants = 4;
};

/// Small drug-like molecules built from a fixed fragment set. Molecules come
/// in families: a base scaffold followed by variants that each add one
/// substituent, so similar pairs differing by a ring are common. Returns
/// distinct canonical SMILES; deterministic in the seed.
std::vector<std::string> toy_corpus(const ToyCorpusOptions &options);

}  // namespace g2g

#endif  // G2G_EVALKIT_TOY_CORPUS_H_

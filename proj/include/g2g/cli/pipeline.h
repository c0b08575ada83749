//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_CLI_PIPELINE_H_
#define G2G_CLI_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "g2g/evalkit/report.h"
#include "g2g/vjtnn/model.h"

namespace g2g {

/// SMILES of a file with one molecule per line.
std::vector<std::string> read_smiles_file(const std::filesystem::path &path);

/// Pairs whose molecules parse and decompose over `vocab`; the rest are
/// described in `log`.
std::vector<PreparedPair> prepare_pairs(std::span<const PairLine> lines,
                                        const ClusterVocab &vocab,
                                        std::vector<std::string> *log);

/// K free-running translations per source. Source i draws its codes from
/// derive_seed(seed, i), so records do not depend on the other sources.
/// Candidates carry canonical SMILES and the similarity to the source;
/// scores are left empty. Sources that cannot be prepared get K failed
/// candidates and a `log` entry.
std::vector<SourceRecord> translate_sources(const Model &model,
                                            std::span<const std::string> sources,
                                            int k, std::uint64_t seed,
                                            std::vector<std::string> *log);

/// Canonical SMILES of the second column of a pair file.
std::set<std::string> pair_targets(std::span<const PairLine> lines);

}  // namespace g2g

#endif  // G2G_CLI_PIPELINE_H_

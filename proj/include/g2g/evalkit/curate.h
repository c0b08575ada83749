//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_EVALKIT_CURATE_H_
#define G2G_EVALKIT_CURATE_H_

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "g2g/evalkit/oracle.h"

namespace g2g {

/// Target scores at least `threshold` above the source score.
struct ImprovementRule {
  double threshold = 0;
};

/// Source and target scores inside closed intervals.
struct RangeRule {
  double source_low;
  double source_high;
  double target_low;
  double target_high;
};

using CurationRule = std::variant<ImprovementRule, RangeRule>;

bool rule_accepts(const CurationRule &rule, double source, double target);

struct CurateOptions {
  double similarity = 0.4;
  CurationRule rule = ImprovementRule{};
  // Molecules that may appear on neither side of a pair.
  std::vector<std::string> excluded;
};

struct CuratedPair {
  std::string source;
  std::string target;
  double similarity;
  double source_score;
  double target_score;
};

struct CurationResult {
  std::vector<CuratedPair> pairs;
  // One entry per skipped input line.
  std::vector<std::string> log;
};

/// All ordered pairs (X, Y) of distinct corpus molecules with
/// sim(X, Y) >= options.similarity that satisfy the rule. Molecules are
/// compared and emitted as canonical SMILES; duplicates collapse to their
/// first occurrence and the output follows corpus order.
CurationResult curate_pairs(std::span<const std::string> corpus,
                            const PropertyOracle &oracle,
                            const CurateOptions &options);

/// Writes "source<TAB>target" lines.
void write_pairs(const std::filesystem::path &path,
                 std::span<const CuratedPair> pairs);

}  // namespace g2g

#endif  // G2G_EVALKIT_CURATE_H_

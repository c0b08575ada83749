//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_EVALKIT_REPORT_H_
#define G2G_EVALKIT_REPORT_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "g2g/evalkit/oracle.h"

namespace g2g {

/// One translation candidate; an absent SMILES marks a failed decode.
struct Candidate {
  std::optional<std::string> smiles;
  std::optional<double> similarity;
  std::optional<double> score;
};

struct SourceRecord {
  std::string source;
  std::optional<double> source_score;
  std::vector<Candidate> candidates;
};

/// Tab-separated report: a header naming K candidate column triples, then
/// one line per source. Missing fields are written as "-".
void write_report(const std::filesystem::path &path,
                  std::span<const SourceRecord> records);
std::string format_report(std::span<const SourceRecord> records);
/// Throws DataError on a malformed file.
std::vector<SourceRecord> read_report(const std::filesystem::path &path);
std::vector<SourceRecord> parse_report(const std::string &text);

/// Recomputes similarities to the source and rescores every molecule with
/// the oracle. Candidates that fail to parse or score lose their score.
void score_report(std::vector<SourceRecord> &records,
                  const PropertyOracle &oracle);

/// Success condition on (source score, candidate score).
struct TargetPredicate {
  enum class Kind { kAlways, kImprovement, kRange };
  Kind kind = Kind::kAlways;
  double threshold = 0;
  double low = 0;
  double high = 0;

  bool operator()(double source, double candidate) const;

  /// "always", "improvement:<t>" or "range:<low>:<high>"; throws
  /// std::invalid_argument otherwise.
  static TargetPredicate parse(const std::string &text);
  std::string to_string() const;
};

/// A candidate counts when it has a SMILES, a score and a similarity.
bool valid_candidate(const Candidate &c);

/// Fraction of sources with a valid candidate of similarity >= delta that
/// satisfies the predicate. 0 for an empty report.
double success_rate(std::span<const SourceRecord> records, double delta,
                    const TargetPredicate &predicate);

struct MeanStd {
  double mean = 0;
  // Population standard deviation.
  double std = 0;
};

/// Per source, the best score gain among valid candidates with
/// similarity >= delta, or 0 when there is none.
MeanStd improvement(std::span<const SourceRecord> records, double delta);

using SimilarityFn =
    std::function<double(const std::string &, const std::string &)>;

/// Tanimoto similarity of default Morgan fingerprints of two SMILES.
double smiles_similarity(const std::string &a, const std::string &b);

/// Mean over sources with at least two valid candidates of the mean
/// pairwise distance 1 - sim among those candidates. Sources with fewer
/// are excluded; 0 when no source qualifies.
double diversity(std::span<const SourceRecord> records,
                 const SimilarityFn &sim = smiles_similarity);

struct Novelty {
  // 1 - |M & S| / |S|
  double over_training;
  // 1 - |M & S| / |M|; NaN when M is empty.
  double over_generated;
};

/// Throws std::invalid_argument when `training_targets` is empty.
Novelty novelty(const std::set<std::string> &generated,
                const std::set<std::string> &training_targets);

/// Canonical SMILES of every valid candidate.
std::set<std::string> generated_set(std::span<const SourceRecord> records);

struct EvalReport {
  std::size_t sources = 0;
  std::size_t candidates = 0;
  std::size_t failed_decodes = 0;
  double delta = 0;
  std::string predicate;
  double success = 0;
  MeanStd improvement;
  double diversity = 0;
  std::optional<Novelty> novelty;
};

/// Metrics of a scored report; novelty only when training targets exist.
EvalReport evaluate_report(std::span<const SourceRecord> records, double delta,
                           const TargetPredicate &predicate,
                           const std::set<std::string> &training_targets);

nlohmann::json to_json(const EvalReport &report);
std::string format_text(const EvalReport &report);

}  // namespace g2g

#endif  // G2G_EVALKIT_REPORT_H_

//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/evalkit/curate.h"

#include <set>
#include <sstream>
#include <unordered_set>

#include "g2g/errors.h"
#include "g2g/molgraph/fingerprint.h"
#include "g2g/molgraph/smiles.h"
#include "g2g/text_io.h"

namespace g2g {

bool rule_accepts(const CurationRule &rule, double source, double target) {
  if (const auto *r = std::get_if<ImprovementRule>(&rule))
    return target - source >= r->threshold;
  const auto &r = std::get<RangeRule>(rule);
  return source >= r.source_low && source <= r.source_high
         && target >= r.target_low && target <= r.target_high;
}

CurationResult curate_pairs(std::span<const std::string> corpus,
                            const PropertyOracle &oracle,
                            const CurateOptions &options) {
  CurationResult result;
  std::unordered_set<std::string> excluded;
  for (const std::string &s: options.excluded) {
    try {
      excluded.insert(write_smiles(parse_smiles(s)));
    } catch (const DataError &) {
      excluded.insert(s);
    }
  }

  std::vector<std::string> smiles;
  std::vector<Molecule> mols;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      Molecule m = parse_smiles(corpus[i]);
      std::string canonical = write_smiles(m);
      if (excluded.count(canonical) || !seen.insert(canonical).second)
        continue;
      smiles.push_back(std::move(canonical));
      mols.push_back(std::move(m));
    } catch (const DataError &e) {
      result.log.push_back("molecule " + std::to_string(i + 1)
                           + " skipped: " + e.what());
    }
  }

  std::vector<std::optional<double>> scores = oracle.score(smiles);
  std::vector<std::string> kept;
  std::vector<double> kept_score;
  std::vector<Fingerprint> fps;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    if (!scores[i]) {
      result.log.push_back("molecule " + smiles[i]
                           + " skipped: oracle returned no score");
      continue;
    }
    kept.push_back(smiles[i]);
    kept_score.push_back(*scores[i]);
    fps.push_back(morgan_fingerprint(mols[i]));
  }

  for (std::size_t x = 0; x < kept.size(); ++x) {
    for (std::size_t y = 0; y < kept.size(); ++y) {
      if (x == y || !rule_accepts(options.rule, kept_score[x], kept_score[y]))
        continue;
      double sim = tanimoto(fps[x], fps[y]);
      if (sim >= options.similarity)
        result.pairs.push_back(
            { kept[x], kept[y], sim, kept_score[x], kept_score[y] });
    }
  }
  return result;
}

void write_pairs(const std::filesystem::path &path,
                 std::span<const CuratedPair> pairs) {
  std::ostringstream out;
  for (const CuratedPair &p: pairs)
    out << p.source << '\t' << p.target << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace g2g

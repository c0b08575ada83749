//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/cli/pipeline.h"

#include <fstream>

#include "g2g/errors.h"
#include "g2g/molgraph/fingerprint.h"
#include "g2g/molgraph/smiles.h"

namespace g2g {

std::vector<std::string> read_smiles_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open " + path.string());
  std::vector<std::string> out;
  for (SmilesLine &l: read_smiles_lines(in))
    out.push_back(std::move(l.smiles));
  return out;
}

std::vector<PreparedPair> prepare_pairs(std::span<const PairLine> lines,
                                        const ClusterVocab &vocab,
                                        std::vector<std::string> *log) {
  std::vector<PreparedPair> out;
  for (const PairLine &l: lines) {
    try {
      out.push_back({ prepare_molecule(parse_smiles(l.source), vocab),
                      prepare_molecule(parse_smiles(l.target), vocab) });
    } catch (const std::exception &e) {
      if (log)
        log->push_back("pair line " + std::to_string(l.line_number)
                       + " skipped: " + e.what());
    }
  }
  return out;
}

std::vector<SourceRecord> translate_sources(const Model &model,
                                            std::span<const std::string> sources,
                                            int k, std::uint64_t seed,
                                            std::vector<std::string> *log) {
  std::vector<SourceRecord> out;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    SourceRecord rec;
    rec.source = sources[i];
    std::optional<PreparedMolecule> prepared;
    try {
      Molecule m = parse_smiles(sources[i]);
      rec.source = write_smiles(m);
      prepared = prepare_molecule(m, model.vocab);
    } catch (const std::exception &e) {
      if (log)
        log->push_back("source " + std::to_string(i + 1) + " ("
                       + sources[i] + ") not translated: " + e.what());
    }
    if (!prepared) {
      rec.candidates.assign(k, Candidate{});
      out.push_back(std::move(rec));
      continue;
    }
    Fingerprint source_fp = morgan_fingerprint(prepared->mol);
    std::mt19937_64 rng(derive_seed(seed, i));
    for (Translation &t: translate(model, *prepared, k, rng)) {
      Candidate c;
      if (t.molecule) {
        c.smiles = write_smiles(*t.molecule);
        c.similarity = tanimoto(source_fp, morgan_fingerprint(*t.molecule));
      }
      rec.candidates.push_back(std::move(c));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::set<std::string> pair_targets(std::span<const PairLine> lines) {
  std::set<std::string> out;
  for (const PairLine &l: lines) {
    try {
      out.insert(write_smiles(parse_smiles(l.target)));
    } catch (const DataError &) {
    }
  }
  return out;
}

}  // namespace g2g

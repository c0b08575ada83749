//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include "g2g/errors.h"
#include "g2g/evalkit/curate.h"
#include "g2g/evalkit/oracle.h"
#include "g2g/evalkit/report.h"
#include "g2g/evalkit/toy_corpus.h"
#include "g2g/molgraph/fingerprint.h"
#include "g2g/molgraph/smiles.h"

namespace g2g {
namespace {

const std::vector<std::string> kTen = {
  "c1ccccc1",
  "Cc1ccccc1",
  "CCCCCc1ccccc1",
  "CCCCCc1ccc(cc1)C1CC1",
  "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
  "CC(C)Cc1ccc(cc1)C(C1CC1)C(=O)O",
  "CCOC(=O)c1ccccc1",
  "CCOC(=O)c1ccc(cc1)C1CCCC1",
  "CCO",
  "OCc1ccccc1",
};

Candidate cand(std::string smiles, double sim, double score) {
  return { std::move(smiles), sim, score };
}

Candidate failed() { return {}; }

std::filesystem::path temp_path(const std::string &name) {
  return std::filesystem::temp_directory_path()
         / ("g2g-evalkit-" + std::to_string(::getpid()) + "-" + name);
}

TEST(Oracle, MethaneWeightIsSumOfAtomicWeights) {
  EXPECT_NEAR(molecular_weight(parse_smiles("C")), 12.011 + 4 * 1.008, 1e-12);
  EXPECT_NEAR(molecular_weight(parse_smiles("C")), 16.04, 0.01);
  // Ethanol C2H6O.
  EXPECT_NEAR(molecular_weight(parse_smiles("CCO")),
              2 * 12.011 + 6 * 1.008 + 15.999, 1e-9);
}

TEST(Oracle, Counts) {
  EXPECT_EQ(ring_count(parse_smiles("c1ccccc1")), 1);
  EXPECT_EQ(ring_count(parse_smiles("c1ccc2ccccc2c1")), 2);
  EXPECT_EQ(ring_count(parse_smiles("CCO")), 0);
  EXPECT_EQ(heavy_atom_count(parse_smiles("CCO")), 3);
  EXPECT_EQ(halogen_count(parse_smiles("FC(Cl)(Br)CI")), 4);
  EXPECT_EQ(halogen_count(parse_smiles("CCO")), 0);
}

TEST(Oracle, BuiltinScoresAndRejects) {
  auto o = builtin_oracle("ring_count");
  EXPECT_EQ(o->name(), "ring_count");
  std::vector<std::string> in = { "C1CC1", "not a smiles", "CC" };
  auto s = o->score(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 1.0);
  EXPECT_FALSE(s[1].has_value());
  EXPECT_EQ(s[2], 0.0);
  EXPECT_THROW(builtin_oracle("logp"), std::invalid_argument);
  for (const std::string &n: builtin_oracle_names())
    EXPECT_NO_THROW(builtin_oracle(n));
}

TEST(Oracle, ExternalProtocolIsLineAligned) {
  auto o = external_oracle("awk '{ print length($0) }'");
  std::vector<std::string> in = { "C", "CCO", "c1ccccc1" };
  auto s = o->score(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s[1], 3.0);
  EXPECT_EQ(s[2], 8.0);
  // Deterministic across calls.
  EXPECT_EQ(o->score(in), s);
}

TEST(Oracle, ExternalBadLinesAndFailures) {
  std::vector<std::string> in = { "C", "CC" };
  auto bad = external_oracle("awk 'NR == 1 { print \"x\" } NR == 2 { print 2 }'");
  auto s = bad->score(in);
  EXPECT_FALSE(s[0].has_value());
  EXPECT_EQ(s[1], 2.0);
  auto nan = external_oracle("awk '{ print \"nan\" }'");
  EXPECT_FALSE(nan->score(in)[0].has_value());
  EXPECT_THROW(external_oracle("false")->score(in), DataError);
  EXPECT_THROW(external_oracle("head -n 1")->score(in), DataError);
}

TEST(Curate, IdentityThresholdKeepsOnlyIdenticalFingerprints) {
  auto o = builtin_oracle("heavy_atom_count");
  CurateOptions opt;
  opt.similarity = 1.0;
  opt.rule = ImprovementRule{ -100 };
  CurationResult r = curate_pairs(kTen, *o, opt);
  for (const CuratedPair &p: r.pairs) {
    EXPECT_EQ(morgan_fingerprint(parse_smiles(p.source)),
              morgan_fingerprint(parse_smiles(p.target)));
  }
}

TEST(Curate, InfiniteThresholdIsEmpty) {
  auto o = builtin_oracle("ring_count");
  CurateOptions opt;
  opt.similarity = 0.0;
  opt.rule = ImprovementRule{ std::numeric_limits<double>::infinity() };
  EXPECT_TRUE(curate_pairs(kTen, *o, opt).pairs.empty());
}

TEST(Curate, MatchesExhaustivePairEnumeration) {
  auto o = builtin_oracle("ring_count");
  CurateOptions opt;
  opt.similarity = 0.4;
  opt.rule = ImprovementRule{ 1 };
  CurationResult r = curate_pairs(kTen, *o, opt);

  std::set<std::pair<std::string, std::string>> expected;
  for (const std::string &x: kTen) {
    for (const std::string &y: kTen) {
      Molecule mx = parse_smiles(x), my = parse_smiles(y);
      if (x == y)
        continue;
      if (ring_count(my) - ring_count(mx) >= 1 && similarity(mx, my) >= 0.4)
        expected.insert({ write_smiles(mx), write_smiles(my) });
    }
  }
  std::set<std::pair<std::string, std::string>> got;
  for (const CuratedPair &p: r.pairs)
    got.insert({ p.source, p.target });
  EXPECT_EQ(got, expected);
  EXPECT_EQ(got.size(), r.pairs.size());
  EXPECT_FALSE(expected.empty());
}

TEST(Curate, PairsReverifyWhenRescored) {
  auto o = builtin_oracle("ring_count");
  CurateOptions opt;
  opt.similarity = 0.3;
  opt.rule = ImprovementRule{ 1 };
  CurationResult r = curate_pairs(kTen, *o, opt);
  ASSERT_FALSE(r.pairs.empty());
  for (const CuratedPair &p: r.pairs) {
    Molecule x = parse_smiles(p.source), y = parse_smiles(p.target);
    EXPECT_GE(similarity(x, y), opt.similarity);
    EXPECT_EQ(similarity(x, y), p.similarity);
    EXPECT_GE(ring_count(y) - ring_count(x), 1);
  }
}

TEST(Curate, RangeRuleAndExclusion) {
  auto o = builtin_oracle("ring_count");
  CurateOptions opt;
  opt.similarity = 0.0;
  opt.rule = RangeRule{ 1, 1, 2, 2 };
  opt.excluded = { "CCCCCc1ccc(cc1)C1CC1" };
  CurationResult r = curate_pairs(kTen, *o, opt);
  const std::string excluded = write_smiles(parse_smiles(opt.excluded[0]));
  ASSERT_FALSE(r.pairs.empty());
  for (const CuratedPair &p: r.pairs) {
    EXPECT_EQ(p.source_score, 1);
    EXPECT_EQ(p.target_score, 2);
    EXPECT_NE(p.source, excluded);
    EXPECT_NE(p.target, excluded);
  }
}

TEST(Curate, UnparsableAndUnscoredMoleculesAreLogged) {
  auto o = external_oracle("awk '{ if ($0 == \"CCO\") print \"?\"; else print 1 }'");
  std::vector<std::string> corpus = { "CC", "C1CC", "CCO", "CCC" };
  CurateOptions opt;
  opt.similarity = 0.0;
  opt.rule = ImprovementRule{ 0 };
  CurationResult r = curate_pairs(corpus, *o, opt);
  EXPECT_EQ(r.log.size(), 2u);
  EXPECT_EQ(r.pairs.size(), 2u);
}

TEST(Metrics, AllFailedDecodesGiveZeroSuccess) {
  std::vector<SourceRecord> recs = {
    { "CC", 0.0, { failed(), failed() } },
    { "CCC", 1.0, { failed() } },
  };
  EXPECT_EQ(success_rate(recs, 0.0, TargetPredicate{}), 0.0);
  MeanStd m = improvement(recs, 0.0);
  EXPECT_EQ(m.mean, 0.0);
  EXPECT_EQ(m.std, 0.0);
}

TEST(Metrics, IdentityTranslations) {
  std::vector<SourceRecord> recs = {
    { "CC", 2.0, { cand("CC", 1.0, 2.0) } },
    { "CCO", 3.0, { cand("CCO", 1.0, 3.0), cand("CCO", 1.0, 3.0) } },
  };
  EXPECT_EQ(success_rate(recs, 1.0, TargetPredicate{}), 1.0);
  MeanStd m = improvement(recs, 0.4);
  EXPECT_EQ(m.mean, 0.0);
  EXPECT_EQ(m.std, 0.0);
  EXPECT_EQ(diversity(recs), 0.0);
}

TEST(Metrics, HandBuiltSuccessCount) {
  TargetPredicate gain = TargetPredicate::parse("improvement:1");
  std::vector<SourceRecord> recs = {
    // Gains 2 but too dissimilar, then gains 1 at 0.5: success.
    { "A", 0.0, { cand("X", 0.2, 2.0), cand("Y", 0.5, 1.0) } },
    // Similar but gains only 0.5: failure.
    { "B", 1.0, { cand("Z", 0.9, 1.5), failed() } },
    // Exactly at both thresholds: success.
    { "C", 2.0, { failed(), cand("W", 0.4, 3.0) } },
  };
  EXPECT_DOUBLE_EQ(success_rate(recs, 0.4, gain), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(success_rate(recs, 0.0, gain), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(success_rate(recs, 0.6, gain), 0.0);
  TargetPredicate range = TargetPredicate::parse("range:1.5:2");
  EXPECT_DOUBLE_EQ(success_rate(recs, 0.0, range), 2.0 / 3.0);
}

TEST(Metrics, ImprovementTakesBestCandidate) {
  std::vector<SourceRecord> one = {
    { "A", 0.0, { cand("X", 0.9, 1.0), cand("Y", 0.9, 3.0) } },
  };
  MeanStd m = improvement(one, 0.4);
  EXPECT_EQ(m.mean, 3.0);
  EXPECT_EQ(m.std, 0.0);
}

TEST(Metrics, ImprovementMatchesBruteForceOnRandomReport) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<SourceRecord> recs;
  for (int i = 0; i < 30; ++i) {
    SourceRecord r{ "S" + std::to_string(i), 5 * u(rng), {} };
    for (int k = 0; k < 5; ++k)
      r.candidates.push_back(u(rng) < 0.2 ? failed()
                                          : cand("C", u(rng), 5 * u(rng)));
    recs.push_back(r);
  }
  const double delta = 0.4;
  std::vector<double> gains;
  for (const SourceRecord &r: recs) {
    std::vector<double> g;
    for (const Candidate &c: r.candidates)
      if (c.smiles && *c.similarity >= delta)
        g.push_back(*c.score - *r.source_score);
    gains.push_back(g.empty() ? 0.0 : *std::max_element(g.begin(), g.end()));
  }
  double mean = 0, var = 0;
  for (double g: gains)
    mean += g;
  mean /= gains.size();
  for (double g: gains)
    var += (g - mean) * (g - mean);
  MeanStd m = improvement(recs, delta);
  EXPECT_NEAR(m.mean, mean, 1e-12);
  EXPECT_NEAR(m.std, std::sqrt(var / gains.size()), 1e-12);
}

TEST(Metrics, DiversityOfTwoCandidates) {
  SimilarityFn fixed = [](const std::string &, const std::string &) {
    return 0.6;
  };
  std::vector<SourceRecord> recs = {
    { "A", 0.0, { cand("X", 1, 0), cand("Y", 1, 0) } },
  };
  EXPECT_NEAR(diversity(recs, fixed), 0.4, 1e-15);
}

TEST(Metrics, DiversityMatchesPairwiseOracleAndExcludesSmallSets) {
  std::vector<std::string> four = { "CCO", "c1ccccc1", "CCN", "C1CCCCC1" };
  SourceRecord big{ "C", 0.0, {} };
  for (const std::string &s: four)
    big.candidates.push_back(cand(s, 1, 0));
  big.candidates.push_back(failed());
  double expected = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      expected += 1 - similarity(parse_smiles(four[i]), parse_smiles(four[j]));
  expected /= 6;
  SourceRecord lone{ "C", 0.0, { cand("CCCC", 1, 0), failed(), failed() } };
  SourceRecord none{ "C", 0.0, { failed() } };
  std::vector<SourceRecord> recs = { big, lone, none };
  EXPECT_NEAR(diversity(recs), expected, 1e-15);
  std::vector<SourceRecord> only_big = { big };
  EXPECT_EQ(diversity(recs), diversity(only_big));
}

TEST(Metrics, NoveltyFormulas) {
  std::set<std::string> s = { "a", "b", "c", "d", "e", "f", "g", "h" };
  std::set<std::string> m = { "a", "b", "x", "y" };
  Novelty n = novelty(m, s);
  EXPECT_DOUBLE_EQ(n.over_training, 0.75);
  EXPECT_DOUBLE_EQ(n.over_generated, 0.5);
  Novelty disjoint = novelty({ "x" }, s);
  EXPECT_EQ(disjoint.over_training, 1.0);
  EXPECT_EQ(disjoint.over_generated, 1.0);
  EXPECT_EQ(novelty(s, s).over_training, 0.0);
  EXPECT_THROW(novelty(m, {}), std::invalid_argument);
  EXPECT_TRUE(std::isnan(novelty({}, s).over_generated));
}

TEST(Metrics, PermutationInvariant) {
  std::vector<SourceRecord> recs = {
    { "CCO", 0.0, { cand("CCCO", 0.5, 1.0), cand("CCCCO", 0.3, 2.0) } },
    { "CC", 1.0, { failed(), cand("CCN", 0.7, 0.0) } },
    { "CCN", 0.5, { cand("c1ccccc1", 0.1, 4.0), cand("CCO", 0.6, 0.6) } },
  };
  TargetPredicate p = TargetPredicate::parse("improvement:0.05");
  std::set<std::string> train = { "CCCO", "CCC" };
  EvalReport base = evaluate_report(recs, 0.4, p, train);
  std::vector<SourceRecord> shuffled = recs;
  std::sort(shuffled.begin(), shuffled.end(),
            [](const auto &a, const auto &b) { return a.source < b.source; });
  do {
    EvalReport e = evaluate_report(shuffled, 0.4, p, train);
    EXPECT_EQ(e.success, base.success);
    EXPECT_NEAR(e.improvement.mean, base.improvement.mean, 1e-15);
    EXPECT_NEAR(e.improvement.std, base.improvement.std, 1e-15);
    EXPECT_NEAR(e.diversity, base.diversity, 1e-15);
    EXPECT_EQ(e.novelty->over_training, base.novelty->over_training);
  } while (std::next_permutation(
      shuffled.begin(), shuffled.end(),
      [](const auto &a, const auto &b) { return a.source < b.source; }));
}

TEST(Report, RoundTripAndMissingFields) {
  std::vector<SourceRecord> recs = {
    { "CCO", 0.1, { cand("CCCO", 0.5, 1.0 / 3.0), failed() } },
    { "CC", std::nullopt, { failed(), { "CCN", std::nullopt, std::nullopt } } },
  };
  std::string text = format_report(recs);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "source\tsource_score\tcandidate_1\tsimilarity_1\tscore_1"
            "\tcandidate_2\tsimilarity_2\tscore_2");
  std::vector<SourceRecord> back = parse_report(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(format_report(back), text);
  EXPECT_EQ(*back[0].candidates[0].score, 1.0 / 3.0);
  EXPECT_FALSE(back[1].source_score.has_value());
  EXPECT_EQ(*back[1].candidates[1].smiles, "CCN");

  auto path = temp_path("report.tsv");
  write_report(path, recs);
  EXPECT_EQ(format_report(read_report(path)), text);
  std::filesystem::remove(path);
}

TEST(Report, MalformedInputThrows) {
  EXPECT_THROW(parse_report(""), DataError);
  EXPECT_THROW(parse_report("smiles\tx\n"), DataError);
  EXPECT_THROW(parse_report("source\tsource_score\nCC\n"), DataError);
  EXPECT_THROW(parse_report("source\tsource_score\nCC\tabc\n"), DataError);
}

TEST(Report, ScoringRecomputesSimilarityAndScores) {
  std::vector<SourceRecord> recs = {
    { "CCO", std::nullopt,
      { { "CCCO", std::nullopt, std::nullopt }, failed(),
        { "C1CC", 0.9, 5.0 } } },
  };
  score_report(recs, *builtin_oracle("heavy_atom_count"));
  EXPECT_EQ(recs[0].source_score, 3.0);
  EXPECT_EQ(recs[0].candidates[0].score, 4.0);
  EXPECT_EQ(recs[0].candidates[0].similarity,
            similarity(parse_smiles("CCO"), parse_smiles("CCCO")));
  EXPECT_FALSE(recs[0].candidates[1].score.has_value());
  EXPECT_FALSE(valid_candidate(recs[0].candidates[2]));
}

TEST(Report, PredicateParsing) {
  EXPECT_EQ(TargetPredicate::parse("always").kind,
            TargetPredicate::Kind::kAlways);
  TargetPredicate r = TargetPredicate::parse("range:0.9:1");
  EXPECT_TRUE(r(0, 0.95));
  EXPECT_FALSE(r(0, 0.5));
  EXPECT_EQ(TargetPredicate::parse(r.to_string()).to_string(), r.to_string());
  TargetPredicate g = TargetPredicate::parse("improvement:1");
  EXPECT_TRUE(g(1, 2));
  EXPECT_FALSE(g(1, 1.5));
  EXPECT_THROW(TargetPredicate::parse("range:1"), std::invalid_argument);
  EXPECT_THROW(TargetPredicate::parse("improvement:x"), std::invalid_argument);
  EXPECT_THROW(TargetPredicate::parse("better"), std::invalid_argument);
}

TEST(ToyCorpus, DeterministicValidAndDistinct) {
  ToyCorpusOptions opt;
  opt.size = 200;
  opt.seed = 3;
  std::vector<std::string> a = toy_corpus(opt);
  EXPECT_EQ(a, toy_corpus(opt));
  ASSERT_EQ(a.size(), 200u);
  std::set<std::string> distinct(a.begin(), a.end());
  EXPECT_EQ(distinct.size(), a.size());
  for (const std::string &s: a) {
    Molecule m = parse_smiles(s);
    EXPECT_TRUE(check_valence(m).empty()) << s;
    EXPECT_LE(m.num_atoms(), opt.max_heavy_atoms);
    EXPECT_EQ(write_smiles(m), s);
  }
  opt.seed = 4;
  EXPECT_NE(toy_corpus(opt), a);
}

}  // namespace
}  // namespace g2g

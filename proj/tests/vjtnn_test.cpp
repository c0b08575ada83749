//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "g2g/errors.h"
#include "g2g/molgraph/smiles.h"
#include "g2g/text_io.h"
#include "g2g/vjtnn/train.h"
#include "grad_check.h"

namespace g2g {
namespace {

const std::vector<std::pair<std::string, std::string>> kPairs = {
  { "CCO", "CCCO" },
  { "c1ccccc1", "Cc1ccccc1" },
  { "CC(=O)O", "CC(=O)OC" },
  { "OC1CCCCC1", "OC1CCC(C)CC1" },
  { "CCN", "CCNC" },
};

ClusterVocab pair_vocab() {
  std::vector<Molecule> mols;
  for (const auto &[x, y]: kPairs) {
    mols.push_back(parse_smiles(x));
    mols.push_back(parse_smiles(y));
  }
  return build_vocab(mols);
}

std::vector<PreparedPair> prepared_pairs(const ClusterVocab &vocab) {
  std::vector<PreparedPair> out;
  for (const auto &[x, y]: kPairs)
    out.push_back({ prepare_molecule(parse_smiles(x), vocab),
                    prepare_molecule(parse_smiles(y), vocab) });
  return out;
}

ModelConfig small_config(Precision precision = Precision::kFloat64) {
  ModelConfig c;
  c.hidden_dim = 12;
  c.latent_dim = 3;
  c.graph_iterations = 2;
  c.tree_iterations = 2;
  c.assembly_iterations = 2;
  c.precision = precision;
  return c;
}

std::filesystem::path temp_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("g2g_vjtnn_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(ModelConfig, DefaultsAndJsonRoundTrip) {
  ModelConfig c;
  EXPECT_EQ(c.latent_dim, 8);
  EXPECT_EQ(c.kl_weight, 0.125);
  EXPECT_EQ(c.hidden_dim, 300);
  ModelConfig d = ModelConfig::from_json(small_config().to_json());
  EXPECT_EQ(d.to_json(), small_config().to_json());
  EXPECT_THROW(ModelConfig::from_json("{}"), DataError);
}

TEST(Model, ParameterNamesAreStable) {
  Model m(small_config(), pair_vocab(), 1);
  for (const char *name:
       { "encoder.graph.W1.weight", "encoder.tree.gru.wz.weight",
         "decoder.tree.label_out.weight", "decoder.graph.W3.weight",
         "posterior.mean.weight", "posterior.logvar.bias",
         "perturb.tree_latent.weight", "perturb.graph_source.weight" })
    EXPECT_TRUE(m.store.contains(name)) << name;
}

TEST(Posterior, DifferenceVectorsAreAntisymmetric) {
  ClusterVocab vocab = pair_vocab();
  Model m(small_config(), vocab, 2);
  auto pairs = prepared_pairs(vocab);
  Tape tape;
  EncodedBatch enc;
  const PreparedMolecule *mols[] = { &pairs[3].source, &pairs[3].target,
                                     &pairs[3].source };
  encode_molecules(tape, m, mols, enc);
  Mat sums = enc.tree_sums.value();
  Mat forward = sums.row(1) - sums.row(0);
  Mat backward = sums.row(0) - sums.row(1);
  EXPECT_TRUE(forward == -backward);
  EXPECT_EQ((sums.row(2) - sums.row(0)).norm(), 0.0);
  // Direct sum over node vectors of molecule 1.
  const auto &off = enc.trees.node_offset();
  Mat direct = enc.node_vectors.value()
                   .middleRows(off[1], off[2] - off[1])
                   .colwise()
                   .sum();
  EXPECT_LT((direct - sums.row(1)).norm(), 1e-12);
}

TEST(Posterior, SharedEncoderForSourceAndTarget) {
  ClusterVocab vocab = pair_vocab();
  Model m(small_config(), vocab, 2);
  auto pairs = prepared_pairs(vocab);
  Tape tape;
  EncodedBatch a, b;
  const PreparedMolecule *as_source[] = { &pairs[0].source, &pairs[1].target };
  const PreparedMolecule *as_target[] = { &pairs[1].target, &pairs[0].source };
  encode_molecules(tape, m, as_source, a);
  encode_molecules(tape, m, as_target, b);
  EXPECT_LT((a.graph_sums.value().row(0) - b.graph_sums.value().row(1)).norm(),
            1e-12);
  EXPECT_LT((a.tree_sums.value().row(1) - b.tree_sums.value().row(0)).norm(),
            1e-12);
}

TEST(Posterior, KlValues) {
  ModelConfig c = small_config();
  c.latent_dim = 1;
  Model m(c, pair_vocab(), 3);
  for (Parameter *p: m.store.parameters()) {
    if (p->name.rfind("posterior.", 0) == 0)
      p->value.setZero();
  }
  Tape tape;
  Var diff = tape.constant(Mat::Random(2, c.hidden_dim));
  Mat noise = Mat::Zero(2, 2);
  EXPECT_EQ(sample_posterior(tape, m, diff, diff, noise).kl.scalar(), 0.0);
  m.store.get("posterior.mean.bias").value(0, 0) = 1.0;
  Tape tape2;
  Var one = tape2.constant(Mat::Zero(1, c.hidden_dim));
  Posterior p = sample_posterior(tape2, m, one, one, Mat::Zero(1, 2));
  // 0.5 per code, two codes.
  EXPECT_DOUBLE_EQ(p.kl.scalar(), 1.0);
  EXPECT_EQ(p.tree_code.scalar(), 1.0);
}

TEST(Posterior, ReparameterizationGradient) {
  Model m(small_config(), pair_vocab(), 4);
  Mat diff = Mat::Random(3, 12), noise = Mat::Random(3, 6);
  std::vector<Parameter *> params = {
    &m.store.get("posterior.mean.weight"), &m.store.get("posterior.mean.bias"),
    &m.store.get("posterior.logvar.weight"),
    &m.store.get("posterior.logvar.bias")
  };
  auto res = testing::grad_check(params, [&](Tape &tape) {
    Var d = tape.constant(diff);
    Posterior p = sample_posterior(tape, m, d, scale(d, -0.5), noise);
    return add(p.kl, sum_all(square(add(p.tree_code, p.graph_code))));
  });
  EXPECT_LT(res.max_relative_error, 1e-6) << res.worst;
}

TEST(Perturb, IdentityWeightsGiveRelu) {
  ModelConfig c = small_config();
  Model m(c, pair_vocab(), 5);
  m.store.get("perturb.tree_source.weight").value.setIdentity();
  m.store.get("perturb.tree_latent.weight").value.setRandom();
  Tape tape;
  Mat x = Mat::Random(4, c.hidden_dim);
  std::vector<int> owner = { 0, 0, 1, 1 };
  Var out = perturb(tape, m.perturb_tree_source, m.perturb_tree_latent,
                    tape.constant(x), tape.constant(Mat::Zero(2, 3)), owner);
  EXPECT_TRUE(out.value() == Mat(x.cwiseMax(0.0)));

  // Random case, latent broadcast per molecule.
  Mat z = Mat::Random(2, 3);
  Var r = perturb(tape, m.perturb_graph_source, m.perturb_graph_latent,
                  tape.constant(x), tape.constant(z), owner);
  const Mat &w1 = m.store.get("perturb.graph_source.weight").value;
  const Mat &w2 = m.store.get("perturb.graph_latent.weight").value;
  for (int i = 0; i < 4; ++i) {
    Mat expect = (x.row(i) * w1 + z.row(owner[i]) * w2).cwiseMax(0.0);
    EXPECT_LT((r.value().row(i) - expect).norm(), 1e-12);
  }
}

TEST(VaeLoss, TermsAndGradientFlow) {
  ClusterVocab vocab = pair_vocab();
  Model m(small_config(), vocab, 6);
  auto pairs = prepared_pairs(vocab);
  std::vector<const PreparedPair *> batch = { &pairs[0], &pairs[3] };
  std::mt19937_64 rng(1);
  Tape tape;
  VaeLoss l = vae_loss(tape, m, batch, rng);
  double expect = (l.topology.scalar() + l.label.scalar()
                   + l.assembly.scalar() + 0.125 * l.kl.scalar())
                  / 2;
  EXPECT_NEAR(l.total.scalar(), expect, 1e-12);
  EXPECT_GE(l.kl.scalar(), 0.0);
  EXPECT_EQ(l.tree_exact.size(), 2u);
  m.store.zero_grad();
  tape.backward(l.total);
  for (const char *name: { "posterior.mean.weight", "posterior.logvar.weight",
                           "perturb.tree_latent.weight",
                           "perturb.graph_latent.weight",
                           "encoder.graph.W1.weight" })
    EXPECT_GT(m.store.get(name).grad.norm(), 0.0) << name;
}

TEST(VaeLoss, GradientMatchesFiniteDifferences) {
  ClusterVocab vocab = pair_vocab();
  ModelConfig c = small_config();
  c.hidden_dim = 5;
  c.latent_dim = 2;
  Model m(c, vocab, 7);
  auto pairs = prepared_pairs(vocab);
  std::vector<const PreparedPair *> batch = { &pairs[1], &pairs[3] };
  Mat noise = Mat::Random(2, 4);
  std::mt19937_64 rng(0);
  auto res = testing::grad_check(m.store.parameters(), [&](Tape &tape) {
    return vae_loss(tape, m, batch, rng, noise).total;
  }, 1e-5, 1e-6, 7);
  EXPECT_LT(res.max_relative_error, 1e-3) << res.worst;
  EXPECT_GT(res.checked, 100u);
}

TEST(Train, StepsPerEpochAndDeterministicCheckpoints) {
  ClusterVocab vocab = pair_vocab();
  auto pairs = prepared_pairs(vocab);
  std::vector<PreparedPair> many;
  for (int r = 0; r < 7; ++r)
    many.insert(many.end(), pairs.begin(), pairs.end());  // 35 pairs
  std::vector<std::string> bytes;
  for (int run = 0; run < 2; ++run) {
    auto dir = temp_dir("det" + std::to_string(run));
    Model m(small_config(Precision::kFloat32), vocab, 7);
    TrainConfig tc;
    tc.epochs = 1;
    tc.seed = 7;
    tc.checkpoint_dir = dir;
    auto reports = train(m, many, tc);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].steps, 2);  // ceil(35 / 32)
    EXPECT_TRUE(std::filesystem::exists(reports[0].checkpoint));
    bytes.push_back(read_file(reports[0].checkpoint));
  }
  EXPECT_EQ(bytes[0], bytes[1]);
}

TEST(Train, LrAnnealsPerEpoch) {
  ClusterVocab vocab = pair_vocab();
  auto pairs = prepared_pairs(vocab);
  Model m(small_config(), vocab, 8);
  TrainConfig tc;
  tc.epochs = 3;
  tc.lr = 0.01;
  auto reports = train(m, pairs, tc);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_DOUBLE_EQ(reports[0].lr, 0.01);
  EXPECT_DOUBLE_EQ(reports[2].lr, 0.01 * 0.9 * 0.9);
}

TEST(Checkpoint, ModelRoundTrip) {
  ClusterVocab vocab = pair_vocab();
  auto pairs = prepared_pairs(vocab);
  Model m(small_config(), vocab, 9);
  auto path = temp_dir("roundtrip") / "m.ckpt";
  save_model(path, m, 4);
  LoadedModel loaded = load_model(path);
  EXPECT_EQ(loaded.epoch, 4);
  EXPECT_EQ(loaded.model->vocab.entries(), vocab.entries());
  EXPECT_EQ(loaded.model->config.to_json(), m.config.to_json());
  // Float64 models are stored as float32; compare after rounding.
  m.store.set_precision(Precision::kFloat32);
  m.store.set_precision(Precision::kFloat64);
  for (const Parameter *p: m.store.parameters())
    EXPECT_TRUE(p->value == loaded.model->store.get(p->name).value) << p->name;
}

TEST(Translate, ReproducibleAndValid) {
  ClusterVocab vocab = pair_vocab();
  auto pairs = prepared_pairs(vocab);
  Model m(small_config(), vocab, 10);
  for (int run = 0; run < 2; ++run) {
    std::mt19937_64 a(3), b(3);
    auto ta = translate(m, pairs[3].source, 5, a);
    auto tb = translate(m, pairs[3].source, 5, b);
    ASSERT_EQ(ta.size(), 5u);
    for (int k = 0; k < 5; ++k) {
      ASSERT_EQ(ta[k].molecule.has_value(), tb[k].molecule.has_value());
      if (ta[k].molecule) {
        EXPECT_EQ(write_smiles(*ta[k].molecule), write_smiles(*tb[k].molecule));
        EXPECT_TRUE(check_valence(*ta[k].molecule).empty());
      }
      EXPECT_LE(ta[k].tree.size(), m.config.max_nodes);
    }
  }
}

TEST(ReadPairs, ParsesAndRejects) {
  auto dir = temp_dir("pairs");
  write_file_atomic(dir / "ok.tsv", "# header\nCCO\tCCCO\n\nCC\tCCC\n");
  auto p = read_pairs(dir / "ok.tsv");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1].line_number, 4u);
  EXPECT_EQ(p[1].target, "CCC");
  write_file_atomic(dir / "bad.tsv", "CCO CCCO\n");
  EXPECT_THROW(read_pairs(dir / "bad.tsv"), DataError);
  EXPECT_THROW(read_pairs(dir / "missing.tsv"), DataError);
}

}  // namespace
}  // namespace g2g

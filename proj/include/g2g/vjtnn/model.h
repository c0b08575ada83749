//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_VJTNN_MODEL_H_
#define G2G_VJTNN_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "g2g/encoder/encoder.h"
#include "g2g/graphdec/graph_decoder.h"
#include "g2g/junctree/vocab.h"
#include "g2g/treedec/tree_decoder.h"

namespace g2g {

struct ModelConfig {
  int hidden_dim = 300;
  // Per code; the tree and graph codes each have this many dimensions.
  int latent_dim = 8;
  int graph_iterations = 3;
  int tree_iterations = 6;
  int assembly_iterations = 3;
  double kl_weight = 1.0 / 8.0;
  int max_nodes = kDefaultMaxNodes;
  Precision precision = Precision::kFloat32;

  std::string to_json() const;
  static ModelConfig from_json(const std::string &text);
};

/// Stream-separated seed derived from a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Encoder, posterior, perturbation and decoders over one parameter store.
class Model {
public:
  Model(const ModelConfig &config, ClusterVocab vocab, std::uint64_t seed);
  Model(const Model &) = delete;
  Model &operator=(const Model &) = delete;

  ModelConfig config;
  ClusterVocab vocab;
  ParamStore store;
  Encoder encoder;
  TreeDecoder tree_decoder;
  GraphDecoder graph_decoder;
  // Shared by the tree and graph codes.
  Linear posterior_mean;
  Linear posterior_logvar;
  Linear perturb_tree_source;
  Linear perturb_tree_latent;
  Linear perturb_graph_source;
  Linear perturb_graph_latent;
  LabelMask label_mask;
};

/// Molecule with its labeled tree, teacher-forcing traversal and
/// attachment decisions.
struct PreparedMolecule {
  Molecule mol;
  std::string smiles;  // canonical
  JunctionTree tree;
  Traversal traversal;
  std::vector<AssemblyStep> steps;
};

/// Throws DataError when the molecule cannot be decomposed into vocabulary
/// clusters or its assembly cannot be replayed.
PreparedMolecule prepare_molecule(const Molecule &mol,
                                  const ClusterVocab &vocab);

struct PreparedPair {
  PreparedMolecule source;
  PreparedMolecule target;
};

struct PairLine {
  std::size_t line_number;
  std::string source;
  std::string target;
};

/// Two tab-separated SMILES per line; blank and '#' lines are skipped.
std::vector<PairLine> read_pairs(const std::filesystem::path &path);

/// Encodings of a list of molecules (graphs and trees in list order).
struct EncodedBatch {
  GraphBatch graphs;
  TreeBatch trees;
  Var atom_vectors;
  Var node_vectors;
  Var tree_messages;
  Var tree_sums;   // molecules x hidden
  Var graph_sums;  // molecules x hidden
};

/// Fills `out` in place (it is referenced by later scoring contexts).
void encode_molecules(Tape &tape, const Model &model,
                      std::span<const PreparedMolecule *const> mols,
                      EncodedBatch &out);
/// Same for bare trees; graphs are left empty.
void encode_trees(Tape &tape, const Model &model,
                  std::span<const JunctionTree *const> trees,
                  EncodedBatch &out);

struct Posterior {
  Var tree_mean, tree_logvar, graph_mean, graph_logvar;
  Var tree_code, graph_code;  // rows per pair
  Var kl;                     // summed over pairs and both codes, 1 x 1
};

/// Reparameterized sample from the posterior of the difference vectors.
/// The log-variance is -|affine(x)|, so posterior variances never exceed 1.
/// `noise` supplies (pairs x 2 * latent) standard normal draws, tree code
/// first.
Posterior sample_posterior(Tape &tape, const Model &model, Var tree_diff,
                           Var graph_diff, const Mat &noise);

/// relu(W_source x + W_latent z), with z broadcast to every row of its
/// molecule.
Var perturb(Tape &tape, const Linear &source, const Linear &latent,
            Var vectors, Var codes, std::span<const int> owner);

/// Perturbed source vectors of the first `count` molecules of `enc`.
DecoderSources perturbed_sources(Tape &tape, const Model &model,
                                 const EncodedBatch &enc, int count,
                                 Var tree_codes, Var graph_codes);

struct VaeLoss {
  Var total;  // mean over pairs
  Var topology, label, assembly, kl;  // sums over the batch
  std::vector<bool> tree_exact;        // per pair
  int assembly_decisions = 0;
  int assembly_correct = 0;
};

/// Teacher-forced translation loss of a batch. `noise` as in
/// sample_posterior; drawn from `rng` when empty.
VaeLoss vae_loss(Tape &tape, const Model &model,
                 std::span<const PreparedPair *const> batch,
                 std::mt19937_64 &rng, const Mat &noise = Mat());

struct Translation {
  std::optional<Molecule> molecule;
  JunctionTree tree;
  bool truncated = false;
  std::string failure;  // empty on success
};

/// Free-running decode of `source` under fixed codes (1 x latent each).
Translation decode_with_codes(const Model &model,
                              const PreparedMolecule &source,
                              const Mat &tree_code, const Mat &graph_code);
/// `k` decodes with codes drawn from the standard normal prior.
std::vector<Translation> translate(const Model &model,
                                   const PreparedMolecule &source, int k,
                                   std::mt19937_64 &rng);

/// Posterior means for a pair (1 x latent each).
std::pair<Mat, Mat> posterior_means(const Model &model,
                                    const PreparedPair &pair);

}  // namespace g2g

#endif  // G2G_VJTNN_MODEL_H_

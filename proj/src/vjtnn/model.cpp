//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/vjtnn/model.h"

#include <fstream>

#include <json.hpp>

#include "g2g/errors.h"
#include "g2g/molgraph/smiles.h"

namespace g2g {
namespace {

Var rows_of(Var v, int count) { return slice_rows(v, 0, count); }

}  // namespace

std::string ModelConfig::to_json() const {
  nlohmann::json j;
  j["hidden_dim"] = hidden_dim;
  j["latent_dim"] = latent_dim;
  j["graph_iterations"] = graph_iterations;
  j["tree_iterations"] = tree_iterations;
  j["assembly_iterations"] = assembly_iterations;
  j["kl_weight"] = kl_weight;
  j["max_nodes"] = max_nodes;
  j["precision"] = precision == Precision::kFloat32 ? "float32" : "float64";
  return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string &text) {
  ModelConfig c;
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.latent_dim = j.at("latent_dim").get<int>();
    c.graph_iterations = j.at("graph_iterations").get<int>();
    c.tree_iterations = j.at("tree_iterations").get<int>();
    c.assembly_iterations = j.at("assembly_iterations").get<int>();
    c.kl_weight = j.at("kl_weight").get<double>();
    c.max_nodes = j.at("max_nodes").get<int>();
    std::string p = j.at("precision").get<std::string>();
    if (p != "float32" && p != "float64")
      throw DataError("unknown precision '" + p + "'");
    c.precision = p == "float32" ? Precision::kFloat32 : Precision::kFloat64;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("model config: ") + e.what());
  }
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Model::Model(const ModelConfig &cfg, ClusterVocab v, std::uint64_t seed)
    : config(cfg),
      vocab(std::move(v)),
      store(cfg.precision, "model"),
      label_mask(vocab) {
  if (config.hidden_dim <= 0 || config.latent_dim <= 0)
    throw std::invalid_argument("model dimensions must be positive");
  if (vocab.size() == 0)
    throw std::invalid_argument("empty vocabulary");
  std::mt19937_64 rng(derive_seed(seed, 0));
  const int h = config.hidden_dim, l = config.latent_dim;
  encoder = Encoder::create(store, vocab.size(), h, config.graph_iterations,
                            config.tree_iterations, rng);
  tree_decoder = TreeDecoder::create(store, vocab.size(), h, rng);
  graph_decoder =
      GraphDecoder::create(store, h, config.assembly_iterations, rng);
  posterior_mean = Linear::create(store, "posterior.mean", h, l, true, rng);
  posterior_logvar =
      Linear::create(store, "posterior.logvar", h, l, true, rng);
  perturb_tree_source =
      Linear::create(store, "perturb.tree_source", h, h, false, rng);
  perturb_tree_latent =
      Linear::create(store, "perturb.tree_latent", l, h, false, rng);
  perturb_graph_source =
      Linear::create(store, "perturb.graph_source", h, h, false, rng);
  perturb_graph_latent =
      Linear::create(store, "perturb.graph_latent", l, h, false, rng);
}

PreparedMolecule prepare_molecule(const Molecule &mol,
                                  const ClusterVocab &vocab) {
  PreparedMolecule p;
  p.mol = mol;
  p.smiles = write_smiles(mol);
  p.tree = labeled_tree(mol, vocab);
  p.traversal = dfs_traversal(p.tree, ChildOrder::kByLabel);
  p.steps = plan_assembly(mol, p.tree, p.traversal);
  return p;
}

std::vector<PairLine> read_pairs(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open pair file " + path.string());
  std::vector<PairLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(number)
                      + ": expected two tab-separated SMILES");
    out.push_back({ number, line.substr(0, tab), line.substr(tab + 1) });
  }
  return out;
}

void encode_molecules(Tape &tape, const Model &model,
                      std::span<const PreparedMolecule *const> mols,
                      EncodedBatch &out) {
  out = EncodedBatch();
  for (const PreparedMolecule *m: mols) {
    out.graphs.add(m->mol);
    out.trees.add(m->tree);
  }
  const int n = static_cast<int>(mols.size());
  out.atom_vectors = run_graph_mpn(tape, model.encoder.graph, out.graphs,
                                   model.encoder.graph_iterations);
  TreeEncoding te = run_tree_encoder(tape, model.encoder.tree, out.trees,
                                     model.encoder.tree_iterations);
  out.node_vectors = te.vectors;
  out.tree_messages = te.messages;
  out.tree_sums = scatter_add_rows(out.node_vectors, out.trees.node_owner(), n);
  out.graph_sums = scatter_add_rows(out.atom_vectors, out.graphs.atom_owner, n);
}

void encode_trees(Tape &tape, const Model &model,
                  std::span<const JunctionTree *const> trees,
                  EncodedBatch &out) {
  out = EncodedBatch();
  for (const JunctionTree *t: trees)
    out.trees.add(*t);
  TreeEncoding te = run_tree_encoder(tape, model.encoder.tree, out.trees,
                                     model.encoder.tree_iterations);
  out.node_vectors = te.vectors;
  out.tree_messages = te.messages;
  out.tree_sums = scatter_add_rows(out.node_vectors, out.trees.node_owner(),
                                   static_cast<int>(trees.size()));
}

Posterior sample_posterior(Tape &tape, const Model &model, Var tree_diff,
                           Var graph_diff, const Mat &noise) {
  const int l = model.config.latent_dim;
  if (noise.rows() != tree_diff.rows() || noise.cols() != 2 * l)
    throw ShapeError("sample_posterior: noise has the wrong shape");
  Posterior p;
  p.tree_mean = model.posterior_mean(tape, tree_diff);
  auto negative_abs = [](Var x) {
    return scale(add(relu(x), relu(scale(x, -1.0))), -1.0);
  };
  p.tree_logvar = negative_abs(model.posterior_logvar(tape, tree_diff));
  p.graph_mean = model.posterior_mean(tape, graph_diff);
  p.graph_logvar = negative_abs(model.posterior_logvar(tape, graph_diff));
  auto sample = [&](Var mean, Var logvar, const Mat &eps) {
    return add(mean, mul(exp(scale(logvar, 0.5)), tape.constant(eps)));
  };
  p.tree_code = sample(p.tree_mean, p.tree_logvar, noise.leftCols(l));
  p.graph_code = sample(p.graph_mean, p.graph_logvar, noise.rightCols(l));
  auto kl = [](Var mean, Var logvar) {
    return sum_all(add_scalar(sub(add(square(mean), exp(logvar)), logvar),
                              -1.0));
  };
  p.kl = scale(add(kl(p.tree_mean, p.tree_logvar),
                   kl(p.graph_mean, p.graph_logvar)),
               0.5);
  return p;
}

Var perturb(Tape &tape, const Linear &source, const Linear &latent,
            Var vectors, Var codes, std::span<const int> owner) {
  return relu(add(source(tape, vectors),
                  gather_rows(latent(tape, codes), owner)));
}

DecoderSources perturbed_sources(Tape &tape, const Model &model,
                                 const EncodedBatch &enc, int count,
                                 Var tree_codes, Var graph_codes) {
  const auto &node_offset = enc.trees.node_offset();
  const auto &atom_offset = enc.graphs.atom_offset;
  if (count <= 0 || count > enc.trees.trees() || count > enc.graphs.graphs())
    throw std::out_of_range("perturbed_sources: bad molecule count");
  const int nodes = node_offset[count], atoms = atom_offset[count];
  std::span<const int> node_owner(enc.trees.node_owner().data(), nodes);
  std::span<const int> atom_owner(enc.graphs.atom_owner.data(), atoms);
  DecoderSources src;
  src.tree.vectors = perturb(tape, model.perturb_tree_source,
                             model.perturb_tree_latent,
                             rows_of(enc.node_vectors, nodes), tree_codes,
                             node_owner);
  src.tree.offset.assign(node_offset.begin(), node_offset.begin() + count + 1);
  src.graph.vectors = perturb(tape, model.perturb_graph_source,
                              model.perturb_graph_latent,
                              rows_of(enc.atom_vectors, atoms), graph_codes,
                              atom_owner);
  src.graph.offset.assign(atom_offset.begin(), atom_offset.begin() + count + 1);
  return src;
}

VaeLoss vae_loss(Tape &tape, const Model &model,
                 std::span<const PreparedPair *const> batch,
                 std::mt19937_64 &rng, const Mat &noise_in) {
  const int b = static_cast<int>(batch.size());
  if (b == 0)
    throw std::invalid_argument("vae_loss: empty batch");
  const int l = model.config.latent_dim;
  std::vector<const PreparedMolecule *> mols;
  for (const PreparedPair *p: batch)
    mols.push_back(&p->source);
  for (const PreparedPair *p: batch)
    mols.push_back(&p->target);
  EncodedBatch enc;
  encode_molecules(tape, model, mols, enc);

  Var tree_diff = sub(slice_rows(enc.tree_sums, b, b),
                      slice_rows(enc.tree_sums, 0, b));
  Var graph_diff = sub(slice_rows(enc.graph_sums, b, b),
                       slice_rows(enc.graph_sums, 0, b));
  Mat noise = noise_in;
  if (noise.size() == 0) {
    noise.resize(b, 2 * l);
    for (Eigen::Index i = 0; i < noise.size(); ++i)
      noise.data()[i] = standard_normal(rng);
  }
  Posterior post = sample_posterior(tape, model, tree_diff, graph_diff, noise);
  DecoderSources src = perturbed_sources(tape, model, enc, b, post.tree_code,
                                         post.graph_code);

  std::vector<TreeTarget> tree_targets;
  std::vector<AssemblyTarget> assembly_targets;
  for (int i = 0; i < b; ++i) {
    const PreparedMolecule &y = batch[i]->target;
    tree_targets.push_back({ &y.tree, &y.traversal, i });
    for (const AssemblyStep &s: y.steps)
      assembly_targets.push_back({ &s, b + i, i });
  }
  TeacherForcedResult tf =
      teacher_forced_loss(tape, model.tree_decoder, src, tree_targets);

  std::vector<int> atom_owner(
      enc.graphs.atom_owner.begin(),
      enc.graphs.atom_owner.begin() + enc.graphs.atom_offset[b]);
  ScoringContext ctx{ &enc.trees, enc.tree_messages,
                      scatter_add_rows(src.graph.vectors, atom_owner, b) };
  AssemblyLossResult al =
      assembly_loss(tape, model.graph_decoder, ctx, assembly_targets);

  VaeLoss out;
  out.topology = tf.topology_loss;
  out.label = tf.label_loss;
  out.assembly = al.loss;
  out.kl = post.kl;
  Var parts = add(add(tf.topology_loss, tf.label_loss),
                  add(al.loss, scale(post.kl, model.config.kl_weight)));
  out.total = scale(parts, 1.0 / b);
  out.tree_exact = std::move(tf.exact);
  out.assembly_decisions = al.decisions;
  out.assembly_correct = al.correct;
  return out;
}

Translation decode_with_codes(const Model &model,
                              const PreparedMolecule &source,
                              const Mat &tree_code, const Mat &graph_code) {
  Tape tape;
  EncodedBatch enc;
  const PreparedMolecule *one[] = { &source };
  encode_molecules(tape, model, one, enc);
  DecoderSources src =
      perturbed_sources(tape, model, enc, 1, tape.constant(tree_code),
                        tape.constant(graph_code));
  UnrollOptions opt;
  opt.mode = UnrollMode::kGreedy;
  opt.max_nodes = model.config.max_nodes;
  opt.mask = &model.label_mask;
  Unrolled u = unroll_tree(tape, model.tree_decoder, &src, 0, opt);

  Translation out;
  out.tree = u.tree;
  out.truncated = u.truncated;
  EncodedBatch decoded;
  const JunctionTree *trees[] = { &u.tree };
  encode_trees(tape, model, trees, decoded);
  ScoringContext ctx{ &decoded.trees, decoded.tree_messages,
                      sum_rows(src.graph.vectors) };
  GreedyAssembly g = assemble_greedy(
      tape, model.graph_decoder, model.vocab, u.tree,
      dfs_traversal(u.tree, ChildOrder::kByIndex), ctx, 0);
  out.molecule = std::move(g.molecule);
  out.failure = std::move(g.failure);
  return out;
}

std::vector<Translation> translate(const Model &model,
                                   const PreparedMolecule &source, int k,
                                   std::mt19937_64 &rng) {
  const int l = model.config.latent_dim;
  std::vector<Translation> out;
  for (int i = 0; i < k; ++i) {
    Mat tree_code(1, l), graph_code(1, l);
    for (int c = 0; c < l; ++c)
      tree_code(0, c) = standard_normal(rng);
    for (int c = 0; c < l; ++c)
      graph_code(0, c) = standard_normal(rng);
    out.push_back(decode_with_codes(model, source, tree_code, graph_code));
  }
  return out;
}

std::pair<Mat, Mat> posterior_means(const Model &model,
                                    const PreparedPair &pair) {
  Tape tape;
  EncodedBatch enc;
  const PreparedMolecule *mols[] = { &pair.source, &pair.target };
  encode_molecules(tape, model, mols, enc);
  Var tree_diff = sub(slice_rows(enc.tree_sums, 1, 1),
                      slice_rows(enc.tree_sums, 0, 1));
  Var graph_diff = sub(slice_rows(enc.graph_sums, 1, 1),
                       slice_rows(enc.graph_sums, 0, 1));
  return { model.posterior_mean(tape, tree_diff).value(),
           model.posterior_mean(tape, graph_diff).value() };
}

}  // namespace g2g

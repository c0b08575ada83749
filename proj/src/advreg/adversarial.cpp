//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/advreg/adversarial.h"

#include <cmath>

#include <json.hpp>

#include "g2g/errors.h"
#include "g2g/tensorcore/adam.h"

namespace g2g {

Discriminator Discriminator::create(ParamStore &store, int input,
                                    const DiscriminatorConfig &config,
                                    std::mt19937_64 &rng) {
  if (config.layers < 1 || config.hidden < 1 || input < 1)
    throw std::invalid_argument("discriminator sizes must be positive");
  Discriminator d;
  d.slope = config.slope;
  int in = input;
  for (int l = 0; l < config.layers; ++l) {
    int out = l + 1 == config.layers ? 1 : config.hidden;
    d.layers.push_back(Linear::create(store, "disc.layer" + std::to_string(l),
                                      in, out, true, rng));
    in = out;
  }
  return d;
}

Var discriminate(Tape &tape, const Discriminator &disc, Var x) {
  Var a = x;
  for (std::size_t l = 0; l < disc.layers.size(); ++l) {
    a = disc.layers[l](tape, a);
    if (l + 1 < disc.layers.size())
      a = leaky_relu(a, disc.slope);
  }
  return a;
}

Var score_input_gradient(Tape &tape, const Discriminator &disc, Var x) {
  const std::size_t n = disc.layers.size();
  std::vector<Mat> slopes;
  Var a = x;
  for (std::size_t l = 0; l + 1 < n; ++l) {
    Var z = disc.layers[l](tape, a);
    Mat s = z.value().unaryExpr(
        [&](double v) { return v > 0 ? 1.0 : disc.slope; });
    slopes.push_back(std::move(s));
    a = leaky_relu(z, disc.slope);
  }
  Var g = tape.constant(Mat::Ones(x.rows(), 1));
  for (std::size_t l = n; l-- > 0;) {
    g = matmul_nt(g, tape.param(*disc.layers[l].weight));
    if (l > 0)
      g = mul(g, tape.constant(slopes[l - 1]));
  }
  return g;
}

Var gradient_penalty(Tape &tape, const Discriminator &disc, Var x) {
  Var g = score_input_gradient(tape, disc, x);
  Var norm = sqrt(add_scalar(sum_cols(square(g)), 1e-12));
  return mean_all(square(add_scalar(norm, -1.0)));
}

Unrolled soft_decode(Tape &tape, const Model &model,
                     const DecoderSources &sources, int group,
                     bool gate_gradient) {
  UnrollOptions opt;
  opt.mode = UnrollMode::kSoft;
  opt.gate_gradient = gate_gradient;
  opt.max_nodes = model.config.max_nodes;
  return unroll_tree(tape, model.tree_decoder, &sources, group, opt);
}

Unrolled real_tree_repr(Tape &tape, const Model &model,
                        const PreparedMolecule &target) {
  UnrollOptions opt;
  opt.mode = UnrollMode::kTeacher;
  opt.teacher = &target.tree;
  opt.teacher_traversal = &target.traversal;
  return unroll_tree(tape, model.tree_decoder, nullptr, 0, opt);
}

AdversarialRegularizer::AdversarialRegularizer(const Model &model,
                                               const AdversarialConfig &config,
                                               std::uint64_t seed)
    : config_(config), store_(model.config.precision, "disc") {
  std::mt19937_64 rng(derive_seed(seed, 2));
  disc_ = Discriminator::create(
      store_, model.vocab.size() + model.config.hidden_dim, config.disc, rng);
}

std::string AdversarialRegularizer::metadata() const {
  nlohmann::json j;
  j["gan_weight"] = config_.gan_weight;
  j["disc_iters"] = config_.disc_iters;
  j["disc_warmup"] = config_.disc_warmup;
  j["real_gradient"] = config_.real_gradient;
  j["gp_weight"] = config_.gp_weight;
  j["gan_start_epoch"] = config_.gan_start_epoch;
  j["disc_lr"] = config_.disc_lr;
  j["disc_hidden"] = config_.disc.hidden;
  j["disc_layers"] = config_.disc.layers;
  j["disc_slope"] = config_.disc.slope;
  return j.dump();
}

Var AdversarialRegularizer::representations(
    Tape &tape, const Model &model,
    std::span<const PreparedMolecule *const> sources,
    std::span<const PreparedMolecule *const> targets, std::mt19937_64 &rng,
    bool real, int *truncated) {
  std::vector<Var> rows;
  if (real) {
    for (const PreparedMolecule *t: targets)
      rows.push_back(real_tree_repr(tape, model, *t).representation());
    return concat_rows(rows);
  }
  const int b = static_cast<int>(sources.size());
  const int l = model.config.latent_dim;
  EncodedBatch enc;
  encode_molecules(tape, model, sources, enc);
  Mat tree_codes(b, l), graph_codes(b, l);
  for (int i = 0; i < b; ++i) {
    for (int c = 0; c < l; ++c)
      tree_codes(i, c) = standard_normal(rng);
    for (int c = 0; c < l; ++c)
      graph_codes(i, c) = standard_normal(rng);
  }
  DecoderSources src =
      perturbed_sources(tape, model, enc, b, tape.constant(tree_codes),
                        tape.constant(graph_codes));
  for (int i = 0; i < b; ++i) {
    Unrolled u = soft_decode(tape, model, src, i);
    if (truncated != nullptr && u.truncated)
      ++*truncated;
    rows.push_back(u.representation());
  }
  return concat_rows(rows);
}

Var AdversarialRegularizer::round(
    Tape &tape, const Model &model,
    std::span<const PreparedMolecule *const> sources,
    std::span<const PreparedMolecule *const> targets, std::mt19937_64 &rng) {
  if (sources.empty() || targets.empty())
    throw std::invalid_argument("adversarial round: empty batch");
  RoundStats stats;
  Mat real;
  {
    Tape scratch;
    real = representations(scratch, model, sources, targets, rng, true,
                           nullptr)
               .value();
  }
  AdamConfig adam;
  adam.lr = config_.disc_lr;
  adam.beta1 = 0.5;
  adam.beta2 = 0.9;
  const int steps =
      config_.disc_iters + (history_.empty() ? config_.disc_warmup : 0);
  for (int k = 0; k < steps; ++k) {
    Mat fake;
    {
      Tape scratch;
      fake = representations(scratch, model, sources, targets, rng, false,
                             nullptr)
                 .value();
    }
    Tape critic;
    Var r = critic.constant(real);
    Var f = critic.constant(fake);
    // Interpolates pair real and fake rows cyclically.
    Mat mix(std::max(real.rows(), fake.rows()), real.cols());
    for (Eigen::Index i = 0; i < mix.rows(); ++i) {
      double eps = uniform01(rng);
      mix.row(i) = eps * real.row(i % real.rows())
                   + (1 - eps) * fake.row(i % fake.rows());
    }
    Var dr = mean_all(discriminate(critic, disc_, r));
    Var df = mean_all(discriminate(critic, disc_, f));
    Var gp = gradient_penalty(critic, disc_, critic.constant(mix));
    Var loss = add(sub(df, dr), scale(gp, config_.gp_weight));
    if (!std::isfinite(loss.scalar()))
      throw NumericError("non-finite critic objective (penalty "
                         + std::to_string(gp.scalar()) + ")");
    store_.zero_grad();
    critic.backward(loss);
    adam_step(store_, adam);
    stats.gap = dr.scalar() - df.scalar();
    stats.penalty = gp.scalar();
    stats.disc_loss = loss.scalar();
  }
  Var r = config_.real_gradient
              ? representations(tape, model, sources, targets, rng, true,
                                nullptr)
              : tape.constant(real);
  Var f = representations(tape, model, sources, targets, rng, false,
                          &stats.truncated);
  Var term = sub(mean_all(discriminate(tape, disc_, r)),
                 mean_all(discriminate(tape, disc_, f)));
  stats.generator_term = term.scalar();
  history_.push_back(stats);
  return scale(term, config_.gan_weight);
}

Var AdversarialRegularizer::generator_term(
    Tape &tape, Model &model, std::span<const PreparedPair *const> batch,
    int epoch, std::mt19937_64 &rng) {
  if (epoch < config_.gan_start_epoch)
    return Var();
  std::vector<const PreparedMolecule *> sources, targets;
  for (const PreparedPair *p: batch) {
    sources.push_back(&p->source);
    targets.push_back(&p->target);
  }
  return round(tape, model, sources, targets, rng);
}

}  // namespace g2g

//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_ADVREG_ADVERSARIAL_H_
#define G2G_ADVREG_ADVERSARIAL_H_

#include <random>
#include <span>
#include <string>
#include <vector>

#include "g2g/vjtnn/train.h"

namespace g2g {

struct DiscriminatorConfig {
  int hidden = 300;
  // Affine layers, including the scalar output layer.
  int layers = 3;
  double slope = 0.2;
};

/// Feed-forward critic with LeakyReLU between affine layers.
struct Discriminator {
  std::vector<Linear> layers;
  double slope = 0.2;

  static Discriminator create(ParamStore &store, int input,
                              const DiscriminatorConfig &config,
                              std::mt19937_64 &rng);
};

/// One score per row of `x`; rows x 1.
Var discriminate(Tape &tape, const Discriminator &disc, Var x);

/// Gradient of the score of each row with respect to that row, written as
/// a tape expression so that it can itself be differentiated with respect
/// to the critic parameters; rows x input.
Var score_input_gradient(Tape &tape, const Discriminator &disc, Var x);

/// mean over rows of (||grad D(x_i)|| - 1)^2.
Var gradient_penalty(Tape &tape, const Discriminator &disc, Var x);

/// Free-running unroll that feeds label distributions and gates messages
/// with straight-through thresholds; representation() is [q_root, s_root].
Unrolled soft_decode(Tape &tape, const Model &model,
                     const DecoderSources &sources, int group,
                     bool gate_gradient = true);

/// Teacher-forced unroll over the target's tree with one-hot labels.
Unrolled real_tree_repr(Tape &tape, const Model &model,
                        const PreparedMolecule &target);

struct AdversarialConfig {
  double gan_weight = 1.0;
  int disc_iters = 5;
  // Extra critic steps before the first generator round.
  int disc_warmup = 0;
  // Whether the generator term also differentiates the teacher-forced real
  // representations.
  bool real_gradient = true;
  double gp_weight = 10.0;
  // First epoch (1-based) with adversarial updates.
  int gan_start_epoch = 1;
  double disc_lr = 1e-3;
  DiscriminatorConfig disc;
};

struct RoundStats {
  // Last critic step: mean D(real) - mean D(fake), the penalty, and the
  // full critic objective.
  double gap = 0;
  double penalty = 0;
  double disc_loss = 0;
  // mean D(real) - mean D(fake) under the generator step's tape.
  double generator_term = 0;
  int truncated = 0;
};

/// Critic and the alternating WGAN-GP schedule, plugged into train().
class AdversarialRegularizer: public TrainExtension {
public:
  AdversarialRegularizer(const Model &model, const AdversarialConfig &config,
                         std::uint64_t seed);

  /// Runs `disc_iters` critic steps on representations of `targets`
  /// (teacher-forced) and of `sources` decoded under prior codes, then
  /// returns gan_weight * (mean D(real) - mean D(fake)) on `tape`.
  /// Throws NumericError when a critic objective is not finite.
  Var round(Tape &tape, const Model &model,
            std::span<const PreparedMolecule *const> sources,
            std::span<const PreparedMolecule *const> targets,
            std::mt19937_64 &rng);

  Var generator_term(Tape &tape, Model &model,
                     std::span<const PreparedPair *const> batch, int epoch,
                     std::mt19937_64 &rng) override;
  std::vector<ParamStore *> stores() override { return { &store_ }; }
  std::string metadata() const override;

  const std::vector<RoundStats> &history() const { return history_; }
  ParamStore &store() { return store_; }
  const Discriminator &discriminator() const { return disc_; }
  const AdversarialConfig &config() const { return config_; }

private:
  // Representations as one matrix row each; fake rows are decoded with
  // fresh prior codes.
  Var representations(Tape &tape, const Model &model,
                      std::span<const PreparedMolecule *const> sources,
                      std::span<const PreparedMolecule *const> targets,
                      std::mt19937_64 &rng, bool real, int *truncated);

  AdversarialConfig config_;
  ParamStore store_;
  Discriminator disc_;
  std::vector<RoundStats> history_;
};

}  // namespace g2g

#endif  // G2G_ADVREG_ADVERSARIAL_H_

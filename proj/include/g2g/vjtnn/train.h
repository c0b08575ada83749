//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_VJTNN_TRAIN_H_
#define G2G_VJTNN_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "g2g/vjtnn/model.h"

namespace g2g {

struct TrainConfig {
  int epochs = 20;
  double lr = 1e-3;
  double lr_decay = 0.9;
  int batch_size = 32;
  std::uint64_t seed = 0;
  // No checkpoints when empty.
  std::filesystem::path checkpoint_dir;
  // Stops after this many optimizer steps when positive.
  long max_steps = 0;
};

/// Extra objective terms and parameter stores trained alongside the model.
class TrainExtension {
public:
  virtual ~TrainExtension() = default;
  /// Called before the model step; may update its own parameters and
  /// return a term to add to the batch loss (or an invalid Var).
  virtual Var generator_term(Tape &tape, Model &model,
                             std::span<const PreparedPair *const> batch,
                             int epoch, std::mt19937_64 &rng) = 0;
  /// Stores saved into the same checkpoint after the model's.
  virtual std::vector<ParamStore *> stores() = 0;
  /// JSON object stored in the checkpoint metadata under "extension".
  virtual std::string metadata() const = 0;
};

struct StepReport {
  int epoch;
  long step;
  double loss;
  double kl;
  int tree_exact;
  int batch;
};

struct EpochReport {
  int epoch;
  double mean_loss;
  double lr;
  long steps;
  std::filesystem::path checkpoint;
};

/// Shuffled mini-batch Adam training with a per-epoch learning-rate decay
/// and one checkpoint per epoch. Throws NumericError on a non-finite loss.
std::vector<EpochReport>
train(Model &model, std::span<const PreparedPair> pairs,
      const TrainConfig &config, TrainExtension *extension = nullptr,
      const std::function<void(const StepReport &)> &on_step = {});

/// Checkpoint file name of an epoch (1-based).
std::filesystem::path checkpoint_path(const std::filesystem::path &dir,
                                      int epoch);

/// Writes parameters, optimizer state and metadata (config, vocabulary,
/// epoch, extension).
void save_model(const std::filesystem::path &path, const Model &model,
                int epoch, TrainExtension *extension = nullptr);

struct LoadedModel {
  std::unique_ptr<Model> model;
  int epoch = 0;
  std::string extension;  // JSON text, empty when absent
};

/// Restores a model; entries of extension stores are skipped.
LoadedModel load_model(const std::filesystem::path &path);

/// Metadata of a checkpoint as JSON text.
std::string read_model_metadata(const std::filesystem::path &path);

}  // namespace g2g

#endif  // G2G_VJTNN_TRAIN_H_

//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/vjtnn/train.h"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "g2g/errors.h"
#include "g2g/tensorcore/adam.h"
#include "g2g/tensorcore/checkpoint.h"
#include "g2g/text_io.h"

namespace g2g {
namespace {

std::string metadata_json(const Model &model, int epoch,
                          TrainExtension *extension) {
  nlohmann::json j;
  j["format"] = "graph2graph-model";
  j["epoch"] = epoch;
  j["config"] = nlohmann::json::parse(model.config.to_json());
  j["vocab"] = model.vocab.entries();
  if (extension != nullptr)
    j["extension"] = nlohmann::json::parse(extension->metadata());
  return j.dump();
}

}  // namespace

std::filesystem::path checkpoint_path(const std::filesystem::path &dir,
                                      int epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "epoch-%03d.ckpt", epoch);
  return dir / name;
}

void save_model(const std::filesystem::path &path, const Model &model,
                int epoch, TrainExtension *extension) {
  std::vector<const ParamStore *> stores = { &model.store };
  if (extension != nullptr) {
    for (ParamStore *s: extension->stores())
      stores.push_back(s);
  }
  save_checkpoint(path, stores, metadata_json(model, epoch, extension));
}

std::string read_model_metadata(const std::filesystem::path &path) {
  return checkpoint_metadata(read_file(path));
}

LoadedModel load_model(const std::filesystem::path &path) {
  std::string bytes = read_file(path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(checkpoint_metadata(bytes));
    if (meta.at("format").get<std::string>() != "graph2graph-model")
      throw DataError("not a model checkpoint: " + path.string());
  } catch (const nlohmann::json::exception &e) {
    throw DataError("checkpoint metadata: " + std::string(e.what()));
  }
  LoadedModel out;
  ModelConfig config = ModelConfig::from_json(meta.at("config").dump());
  ClusterVocab vocab(meta.at("vocab").get<std::vector<std::string>>());
  out.model = std::make_unique<Model>(config, std::move(vocab), 0);
  out.epoch = meta.at("epoch").get<int>();
  bool has_extension = meta.contains("extension");
  if (has_extension)
    out.extension = meta.at("extension").dump();
  ParamStore *stores[] = { &out.model->store };
  decode_checkpoint(bytes, stores, has_extension);
  return out;
}

std::vector<EpochReport> train(Model &model,
                               std::span<const PreparedPair> pairs,
                               const TrainConfig &config,
                               TrainExtension *extension,
                               const std::function<void(const StepReport &)>
                                   &on_step) {
  if (pairs.empty())
    throw DataError("no training pairs");
  if (config.batch_size <= 0 || config.epochs <= 0)
    throw std::invalid_argument("batch size and epochs must be positive");
  if (!config.checkpoint_dir.empty())
    std::filesystem::create_directories(config.checkpoint_dir);
  std::mt19937_64 rng(derive_seed(config.seed, 1));
  std::vector<int> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<int>(i);

  std::vector<EpochReport> reports;
  long step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    // Fisher-Yates with 64-bit draws, independent of the library's
    // distribution implementations.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    AdamConfig adam;
    adam.lr = annealed_lr(config.lr, config.lr_decay, epoch - 1);
    double total = 0;
    long epoch_steps = 0;
    bool stop = false;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t end = std::min(order.size(),
                                 start + static_cast<std::size_t>(
                                             config.batch_size));
      std::vector<const PreparedPair *> batch;
      for (std::size_t k = start; k < end; ++k)
        batch.push_back(&pairs[order[k]]);

      Tape tape;
      Var extra;
      if (extension != nullptr)
        extra = extension->generator_term(tape, model, batch, epoch, rng);
      VaeLoss loss = vae_loss(tape, model, batch, rng);
      Var objective = extra.valid() ? add(loss.total, extra) : loss.total;
      double value = objective.scalar();
      if (!std::isfinite(value))
        throw NumericError("non-finite training loss at epoch "
                           + std::to_string(epoch) + ", step "
                           + std::to_string(step + 1) + " (topology "
                           + std::to_string(loss.topology.scalar())
                           + ", label " + std::to_string(loss.label.scalar())
                           + ", assembly "
                           + std::to_string(loss.assembly.scalar()) + ", kl "
                           + std::to_string(loss.kl.scalar()) + ")");
      model.store.zero_grad();
      tape.backward(objective);
      adam_step(model.store, adam);
      ++step;
      ++epoch_steps;
      total += value;
      if (on_step) {
        int exact = 0;
        for (bool e: loss.tree_exact)
          exact += e ? 1 : 0;
        on_step({ epoch, step, value, loss.kl.scalar(), exact,
                  static_cast<int>(batch.size()) });
      }
      if (config.max_steps > 0 && step >= config.max_steps) {
        stop = true;
        break;
      }
    }
    EpochReport r{ epoch, total / static_cast<double>(epoch_steps), adam.lr,
                   epoch_steps, {} };
    if (!config.checkpoint_dir.empty()) {
      r.checkpoint = checkpoint_path(config.checkpoint_dir, epoch);
      save_model(r.checkpoint, model, epoch, extension);
    }
    reports.push_back(r);
    if (stop)
      break;
  }
  return reports;
}

}  // namespace g2g

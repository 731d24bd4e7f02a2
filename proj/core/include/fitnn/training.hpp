// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fitnn/adam.hpp"
#include "fitnn/fault.hpp"
#include "fitnn/network.hpp"
#include "fitnn/rng.hpp"

namespace fitnn {

struct TrainConfig {
  int epochs_total = 0;
  int warmup_epochs = 1;  // regular epochs preceding the fault epochs
  Eigen::Index batch_size = 100;
  FaultModel train_fault_model = FaultModel::gaussian(0.01);
  std::uint64_t seed = 1;

  void validate() const;
};

enum class EpochPhase { warmup, fit, regular };

std::string epoch_phase_name(EpochPhase p);

struct EpochRecord {
  int epoch = 0;
  EpochPhase phase = EpochPhase::regular;
  double mean_loss = 0.0;
};

// Called once per fault-training batch with the fault that was live during
// that batch's update step.
using FaultObserver =
    std::function<void(int batch_index, int layer, const FaultEvent&)>;

// Called after every finished epoch; lets callers snapshot or evaluate the
// network mid-run.
using EpochCallback = std::function<void(const EpochRecord&, DenseNetwork&)>;

// One pass over the data: shuffle, then forward/MSE/backward/update per
// batch. No layer may be frozen. Returns the mean batch loss.
double regular_epoch(DenseNetwork& net, const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& targets, AdamOptimizer& opt,
                     Eigen::Index batch_size, Rng& rng);

// One fault-training pass. Per batch: pick a layer uniformly, perturb one of
// its parameters, freeze that layer, run one regular training step, then
// revert the fault and unfreeze. Exactly one fault per batch.
double fault_training_epoch(DenseNetwork& net, const Eigen::MatrixXd& inputs,
                            const Eigen::MatrixXd& targets, AdamOptimizer& opt,
                            const FaultModel& model, Eigen::Index batch_size,
                            Rng& rng, const FaultObserver& observer = nullptr);

// Full run: `warmup_epochs` regular epochs followed by fault-training epochs
// when `fault_epochs_enabled`, all-regular otherwise. The epoch RNG stream is
// derived from cfg.seed, so equal seeds give bit-identical trajectories.
std::vector<EpochRecord> train(DenseNetwork& net, const Eigen::MatrixXd& inputs,
                               const Eigen::MatrixXd& targets,
                               const TrainConfig& cfg, bool fault_epochs_enabled,
                               const AdamConfig& adam = {},
                               const EpochCallback& on_epoch = nullptr,
                               const FaultObserver& observer = nullptr);

}  // namespace fitnn

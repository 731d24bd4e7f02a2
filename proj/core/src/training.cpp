// SPDX-License-Identifier: Apache-2.0
#include "fitnn/training.hpp"

#include <stdexcept>

#include "fitnn/mnist.hpp"

namespace fitnn {

void TrainConfig::validate() const {
  if (epochs_total < 0)
    throw std::invalid_argument("TrainConfig: epochs_total must be >= 0");
  if (warmup_epochs < 0 || warmup_epochs > epochs_total)
    throw std::invalid_argument(
        "TrainConfig: need 0 <= warmup_epochs <= epochs_total");
  if (batch_size < 1)
    throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
}

std::string epoch_phase_name(EpochPhase p) {
  switch (p) {
    case EpochPhase::warmup: return "warmup";
    case EpochPhase::fit: return "fit";
    case EpochPhase::regular: return "regular";
  }
  throw std::logic_error("unknown phase");
}

namespace {

void check_training_inputs(const DenseNetwork& net,
                           const Eigen::MatrixXd& inputs,
                           const Eigen::MatrixXd& targets) {
  if (inputs.rows() == 0) throw std::invalid_argument("train: empty dataset");
  if (inputs.rows() != targets.rows())
    throw std::invalid_argument("train: inputs/targets row count mismatch");
  if (inputs.cols() != net.input_dim() || targets.cols() != net.output_dim())
    throw std::invalid_argument("train: dataset does not match network dims");
}

double training_step(DenseNetwork& net, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& y, AdamOptimizer& opt) {
  ForwardCache cache;
  const Eigen::MatrixXd out = net.forward(x, &cache);
  const double loss = mse_loss(out, y);
  const Gradients grads = backward(net, cache, mse_loss_grad(out, y));
  opt.apply_update(net, grads);
  return loss;
}

}  // namespace

double regular_epoch(DenseNetwork& net, const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& targets, AdamOptimizer& opt,
                     Eigen::Index batch_size, Rng& rng) {
  check_training_inputs(net, inputs, targets);
  for (const auto& l : net.layers())
    if (l.frozen)
      throw std::logic_error("regular_epoch: no layer may be frozen");

  double loss_sum = 0.0;
  const auto plan = batch_indices(inputs.rows(), batch_size, &rng);
  for (const auto& idx : plan)
    loss_sum += training_step(net, gather_rows(inputs, idx),
                              gather_rows(targets, idx), opt);
  return loss_sum / static_cast<double>(plan.size());
}

double fault_training_epoch(DenseNetwork& net, const Eigen::MatrixXd& inputs,
                            const Eigen::MatrixXd& targets, AdamOptimizer& opt,
                            const FaultModel& model, Eigen::Index batch_size,
                            Rng& rng, const FaultObserver& observer) {
  check_training_inputs(net, inputs, targets);

  double loss_sum = 0.0;
  const auto plan = batch_indices(inputs.rows(), batch_size, &rng);
  int batch_index = 0;
  for (const auto& idx : plan) {
    const int layer = static_cast<int>(
        rng.uniform_index(static_cast<std::uint64_t>(net.layer_count())));
    const ParamCoord coord = sample_fault_site_in_layer(net, layer, rng);
    const FaultEvent event = inject(net, model, coord, rng);
    net.layers()[layer].frozen = true;

    loss_sum += training_step(net, gather_rows(inputs, idx),
                              gather_rows(targets, idx), opt);

    revert(net, {&event, 1});
    net.layers()[layer].frozen = false;
    if (observer) observer(batch_index, layer, event);
    ++batch_index;
  }
  return loss_sum / static_cast<double>(plan.size());
}

std::vector<EpochRecord> train(DenseNetwork& net, const Eigen::MatrixXd& inputs,
                               const Eigen::MatrixXd& targets,
                               const TrainConfig& cfg, bool fault_epochs_enabled,
                               const AdamConfig& adam,
                               const EpochCallback& on_epoch,
                               const FaultObserver& observer) {
  cfg.validate();
  check_training_inputs(net, inputs, targets);

  AdamOptimizer opt(net, adam);
  Rng rng(derive_seed(cfg.seed, {kStreamTrain}));
  std::vector<EpochRecord> history;
  history.reserve(static_cast<std::size_t>(cfg.epochs_total));

  for (int epoch = 0; epoch < cfg.epochs_total; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    if (!fault_epochs_enabled) {
      rec.phase = EpochPhase::regular;
      rec.mean_loss = regular_epoch(net, inputs, targets, opt, cfg.batch_size, rng);
    } else if (epoch < cfg.warmup_epochs) {
      rec.phase = EpochPhase::warmup;
      rec.mean_loss = regular_epoch(net, inputs, targets, opt, cfg.batch_size, rng);
    } else {
      rec.phase = EpochPhase::fit;
      rec.mean_loss = fault_training_epoch(net, inputs, targets, opt,
                                           cfg.train_fault_model,
                                           cfg.batch_size, rng, observer);
    }
    history.push_back(rec);
    if (on_epoch) on_epoch(rec, net);
  }
  return history;
}

}  // namespace fitnn

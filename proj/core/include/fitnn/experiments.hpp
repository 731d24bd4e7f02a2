// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fitnn/fault.hpp"
#include "fitnn/mnist.hpp"
#include "fitnn/network.hpp"
#include "fitnn/training.hpp"

namespace fitnn {

// Training/testing regimes: golden trains and tests fault-free, baseline
// trains fault-free but tests under injection, fit trains with fault epochs
// and tests under injection.
enum class Regime { golden, baseline, fit };

Regime regime_from_string(const std::string& name);
std::string regime_name(Regime r);

struct ExperimentConfig {
  std::vector<Regime> regimes = {Regime::golden, Regime::baseline, Regime::fit};
  std::vector<int> architecture = {784, 256, 48, 256, 784};
  int epochs_total = 30;
  int warmup_epochs = 1;
  int batch_size = 100;
  FaultModel train_fault_model = FaultModel::gaussian(0.01);
  FaultModel test_fault_model =
      FaultModel::bitflip(QFormat::from_width_frac(16, 12));
  std::vector<double> test_fault_rates = {0.0, 1e-7, 3e-7, 5e-7, 1e-6};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  // Faulty evaluation is averaged over this many independent fault streams.
  int eval_repeats = 1;
  // Epochs (1-based) after which the network is evaluated; empty means the
  // final epoch only. An entry 0 evaluates the untrained network.
  std::vector<int> epoch_checkpoints;
  int center_bits_per_value = 32;
  std::string train_images;
  std::string test_images;
  std::int64_t limit_train = 0;  // 0 = use everything
  std::int64_t limit_test = 0;

  int features() const {  // bottleneck width
    return architecture[architecture.size() / 2];
  }
  std::vector<Activation> activations() const;
  std::vector<int> resolved_checkpoints() const;
  void validate() const;
};

struct RunResult {
  Regime regime = Regime::golden;
  std::uint64_t seed = 0;
  int features = 0;
  int epochs = 0;
  double fault_rate = 0.0;
  double mean_test_loss = 0.0;
  double compression_ratio = 0.0;
};

struct SummaryRow {
  Regime regime = Regime::golden;
  double fault_rate = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  int n_seeds = 0;
};

struct RunHistory {
  Regime regime = Regime::golden;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> records;
};

struct ExperimentOutput {
  std::vector<RunResult> results;
  std::vector<SummaryRow> summary;  // final checkpoint, aggregated over seeds
  std::vector<RunHistory> histories;
};

// Mean MSE over sequential test batches, no faults, no RNG.
double evaluate_clean(const DenseNetwork& net, const ImageDataset& test,
                      Eigen::Index batch_size);

using EvalFaultObserver = std::function<void(int batch, const FaultEvent&)>;

// Mean MSE with faults: per batch a Poisson count of faults is injected at
// parameter-uniform sites, the batch is scored, and the faults are reverted.
// The network is restored bit-exactly before returning.
double evaluate_faulty(DenseNetwork& net, const ImageDataset& test,
                       Eigen::Index batch_size, FaultRate rate,
                       const FaultModel& model, Rng& rng,
                       const EvalFaultObserver& observer = nullptr);

// Bits kept at the bottleneck relative to the 28x28 8-bit input image.
double compression_ratio(int features, int center_bits_per_value,
                         int input_bits_per_image = 28 * 28 * 8);

using ProgressFn = std::function<void(const std::string&)>;

// Runs the full regimes x seeds grid (cells in parallel up to `jobs`), with
// evaluations at every checkpoint x fault rate. Output ordering and values
// are independent of `jobs`.
ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                const ImageDataset& train,
                                const ImageDataset& test, int jobs = 1,
                                const ProgressFn& progress = nullptr);

// Loads the datasets named by the config and delegates to run_experiment.
ExperimentOutput run_experiment_from_files(const ExperimentConfig& cfg,
                                           int jobs = 1,
                                           const ProgressFn& progress = nullptr);

std::string results_csv(const std::vector<RunResult>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string history_csv(const std::vector<EpochRecord>& records);

}  // namespace fitnn

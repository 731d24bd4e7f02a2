// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "fitnn/rng.hpp"

namespace fitnn {

enum class Activation { relu, sigmoid, identity };

Activation activation_from_string(const std::string& name);
std::string activation_name(Activation a);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out_dim x in_dim
  Eigen::VectorXd biases;   // out_dim
  Activation activation = Activation::identity;
  bool frozen = false;      // frozen layers are skipped by optimizer updates

  Eigen::Index in_dim() const { return weights.cols(); }
  Eigen::Index out_dim() const { return weights.rows(); }
  std::int64_t parameter_count() const {
    return static_cast<std::int64_t>(weights.size() + biases.size());
  }
};

// Addresses one scalar parameter inside a network.
struct ParamCoord {
  enum class Kind { weight, bias };
  int layer = 0;
  Kind kind = Kind::weight;
  Eigen::Index row = 0;
  Eigen::Index col = 0;  // unused for biases

  friend bool operator==(const ParamCoord&, const ParamCoord&) = default;
};

// Post-activation outputs of every layer, kept from a forward pass so the
// backward pass can be run against it. activations[0] is the input batch.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Plain feed-forward chain of dense layers.
class DenseNetwork {
 public:
  DenseNetwork() = default;
  explicit DenseNetwork(std::vector<DenseLayer> layers);

  // Glorot-uniform weights, zero biases. `widths` lists the input width
  // followed by every layer's output width.
  static DenseNetwork glorot(const std::vector<int>& widths,
                             const std::vector<Activation>& activations,
                             Rng& rng);

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }

  Eigen::Index input_dim() const { return layers_.front().in_dim(); }
  Eigen::Index output_dim() const { return layers_.back().out_dim(); }
  std::int64_t parameter_count() const;

  // Runs the batch (rows = samples) through the chain. With a cache pointer
  // the per-layer outputs are retained for backward().
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch,
                          ForwardCache* cache = nullptr) const;

  double get_param(const ParamCoord& c) const;
  // Writes a single parameter. Intentionally ignores the frozen flag:
  // freezing gates optimizer updates, not fault injection.
  void set_param(const ParamCoord& c, double value);

  bool same_parameters(const DenseNetwork& other) const;

 private:
  const DenseLayer& checked_layer(const ParamCoord& c) const;
  std::vector<DenseLayer> layers_;
};

double mse_loss(const Eigen::MatrixXd& y, const Eigen::MatrixXd& target);

// d(mse)/dy = 2 (y - target) / numel
Eigen::MatrixXd mse_loss_grad(const Eigen::MatrixXd& y,
                              const Eigen::MatrixXd& target);

// Analytic gradients of the cached forward pass. Gradients of frozen layers
// are computed as well; the optimizer is what discards them.
Gradients backward(const DenseNetwork& net, const ForwardCache& cache,
                   const Eigen::MatrixXd& loss_grad);

// Versioned binary checkpoint (dims, activation names, row-major doubles).
void save_network(const DenseNetwork& net, const std::string& path);
DenseNetwork load_network(const std::string& path);

}  // namespace fitnn

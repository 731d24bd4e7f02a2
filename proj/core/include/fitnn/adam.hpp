// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "fitnn/network.hpp"

namespace fitnn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with per-parameter first/second moments. Layers flagged frozen are
// skipped entirely: neither their parameters nor their moment state move.
class AdamOptimizer {
 public:
  AdamOptimizer(const DenseNetwork& net, const AdamConfig& cfg = {});

  void apply_update(DenseNetwork& net, const Gradients& grads);

  const AdamConfig& config() const { return cfg_; }
  std::int64_t step_count() const { return step_; }

  const std::vector<Eigen::MatrixXd>& weight_m() const { return m_w_; }
  const std::vector<Eigen::MatrixXd>& weight_v() const { return v_w_; }
  const std::vector<Eigen::VectorXd>& bias_m() const { return m_b_; }
  const std::vector<Eigen::VectorXd>& bias_v() const { return v_b_; }

 private:
  AdamConfig cfg_;
  std::int64_t step_ = 0;
  std::vector<Eigen::MatrixXd> m_w_, v_w_;
  std::vector<Eigen::VectorXd> m_b_, v_b_;
};

}  // namespace fitnn

// SPDX-License-Identifier: Apache-2.0
#include "fitnn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace fitnn {

AdamOptimizer::AdamOptimizer(const DenseNetwork& net, const AdamConfig& cfg)
    : cfg_(cfg) {
  if (cfg.learning_rate < 0 || cfg.beta1 < 0 || cfg.beta1 >= 1 ||
      cfg.beta2 < 0 || cfg.beta2 >= 1 || cfg.epsilon <= 0)
    throw std::invalid_argument("AdamConfig: invalid hyperparameters");
  const int n = net.layer_count();
  m_w_.reserve(n); v_w_.reserve(n); m_b_.reserve(n); v_b_.reserve(n);
  for (const auto& l : net.layers()) {
    m_w_.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
    v_w_.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
    m_b_.push_back(Eigen::VectorXd::Zero(l.biases.size()));
    v_b_.push_back(Eigen::VectorXd::Zero(l.biases.size()));
  }
}

void AdamOptimizer::apply_update(DenseNetwork& net, const Gradients& grads) {
  const int n = net.layer_count();
  if (static_cast<int>(grads.weights.size()) != n ||
      static_cast<int>(grads.biases.size()) != n ||
      static_cast<int>(m_w_.size()) != n)
    throw std::invalid_argument("apply_update: gradient/state layer count mismatch");

  ++step_;  // one shared step counter; frozen layers simply skip this step
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));

  for (int k = 0; k < n; ++k) {
    DenseLayer& layer = net.layers()[k];
    if (layer.frozen) continue;
    const Eigen::MatrixXd& gw = grads.weights[k];
    const Eigen::VectorXd& gb = grads.biases[k];
    if (gw.rows() != layer.weights.rows() || gw.cols() != layer.weights.cols() ||
        gb.size() != layer.biases.size())
      throw std::invalid_argument("apply_update: gradient shape mismatch at layer " +
                                  std::to_string(k));

    m_w_[k] = cfg_.beta1 * m_w_[k] + (1.0 - cfg_.beta1) * gw;
    v_w_[k] = cfg_.beta2 * v_w_[k].array().matrix() +
              (1.0 - cfg_.beta2) * gw.array().square().matrix();
    layer.weights.array() -=
        cfg_.learning_rate * (m_w_[k].array() / bc1) /
        ((v_w_[k].array() / bc2).sqrt() + cfg_.epsilon);

    m_b_[k] = cfg_.beta1 * m_b_[k] + (1.0 - cfg_.beta1) * gb;
    v_b_[k] = cfg_.beta2 * v_b_[k].array().matrix() +
              (1.0 - cfg_.beta2) * gb.array().square().matrix();
    layer.biases.array() -=
        cfg_.learning_rate * (m_b_[k].array() / bc1) /
        ((v_b_[k].array() / bc2).sqrt() + cfg_.epsilon);
  }
}

}  // namespace fitnn

// SPDX-License-Identifier: Apache-2.0
#include "fitnn/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fitnn {

namespace {

Eigen::MatrixXd apply_activation(Activation act, Eigen::MatrixXd z) {
  switch (act) {
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::sigmoid:
      return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    case Activation::identity:
      return z;
  }
  throw std::logic_error("unknown activation");
}

// Derivative expressed through the post-activation value. relu's output is
// positive exactly where its input was, so the cached output is enough.
Eigen::MatrixXd activation_grad_from_output(Activation act,
                                            const Eigen::MatrixXd& a) {
  switch (act) {
    case Activation::relu:
      return (a.array() > 0.0).cast<double>();
    case Activation::sigmoid:
      return (a.array() * (1.0 - a.array())).matrix();
    case Activation::identity:
      return Eigen::MatrixXd::Ones(a.rows(), a.cols());
  }
  throw std::logic_error("unknown activation");
}

}  // namespace

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation \"" + name + "\"");
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
  }
  throw std::logic_error("unknown activation");
}

DenseNetwork::DenseNetwork(std::vector<DenseLayer> layers)
    : layers_(std::move(layers)) {
  if (layers_.empty())
    throw std::invalid_argument("DenseNetwork: at least one layer required");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& l = layers_[k];
    if (l.weights.rows() != l.biases.size())
      throw std::invalid_argument("DenseNetwork: bias/weight shape mismatch");
    if (k > 0 && l.in_dim() != layers_[k - 1].out_dim())
      throw std::invalid_argument("DenseNetwork: layer " + std::to_string(k) +
                                  " input dim does not match previous output");
  }
}

DenseNetwork DenseNetwork::glorot(const std::vector<int>& widths,
                                  const std::vector<Activation>& activations,
                                  Rng& rng) {
  if (widths.size() < 2)
    throw std::invalid_argument("glorot: need at least input and output widths");
  if (activations.size() != widths.size() - 1)
    throw std::invalid_argument("glorot: one activation per layer required");
  std::vector<DenseLayer> layers(widths.size() - 1);
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    const int fan_in = widths[k];
    const int fan_out = widths[k + 1];
    if (fan_in <= 0 || fan_out <= 0)
      throw std::invalid_argument("glorot: widths must be positive");
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        w(r, c) = limit * (2.0 * rng.uniform_double() - 1.0);
    layers[k].weights = std::move(w);
    layers[k].biases = Eigen::VectorXd::Zero(fan_out);
    layers[k].activation = activations[k];
  }
  return DenseNetwork(std::move(layers));
}

std::int64_t DenseNetwork::parameter_count() const {
  std::int64_t n = 0;
  for (const auto& l : layers_) n += l.parameter_count();
  return n;
}

Eigen::MatrixXd DenseNetwork::forward(const Eigen::MatrixXd& batch,
                                      ForwardCache* cache) const {
  if (batch.cols() != input_dim())
    throw std::invalid_argument("forward: batch has " +
                                std::to_string(batch.cols()) +
                                " columns, network expects " +
                                std::to_string(input_dim()));
  if (!batch.allFinite())
    throw std::invalid_argument("forward: batch contains non-finite values");
  if (cache) {
    cache->activations.clear();
    cache->activations.reserve(layers_.size() + 1);
    cache->activations.push_back(batch);
  }
  Eigen::MatrixXd a = batch;
  for (const auto& layer : layers_) {
    Eigen::MatrixXd z = a * layer.weights.transpose();
    z.rowwise() += layer.biases.transpose();
    a = apply_activation(layer.activation, std::move(z));
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

const DenseLayer& DenseNetwork::checked_layer(const ParamCoord& c) const {
  if (c.layer < 0 || c.layer >= layer_count())
    throw std::out_of_range("ParamCoord: layer index out of range");
  const DenseLayer& l = layers_[c.layer];
  if (c.kind == ParamCoord::Kind::weight) {
    if (c.row < 0 || c.row >= l.weights.rows() || c.col < 0 ||
        c.col >= l.weights.cols())
      throw std::out_of_range("ParamCoord: weight index out of range");
  } else {
    if (c.row < 0 || c.row >= l.biases.size())
      throw std::out_of_range("ParamCoord: bias index out of range");
  }
  return l;
}

double DenseNetwork::get_param(const ParamCoord& c) const {
  const DenseLayer& l = checked_layer(c);
  return c.kind == ParamCoord::Kind::weight ? l.weights(c.row, c.col)
                                            : l.biases(c.row);
}

void DenseNetwork::set_param(const ParamCoord& c, double value) {
  checked_layer(c);
  DenseLayer& l = layers_[c.layer];
  if (c.kind == ParamCoord::Kind::weight)
    l.weights(c.row, c.col) = value;
  else
    l.biases(c.row) = value;
}

bool DenseNetwork::same_parameters(const DenseNetwork& other) const {
  if (layer_count() != other.layer_count()) return false;
  for (int k = 0; k < layer_count(); ++k) {
    const auto& a = layers_[k];
    const auto& b = other.layers_[k];
    if (a.weights.rows() != b.weights.rows() ||
        a.weights.cols() != b.weights.cols())
      return false;
    // bitwise comparison, not tolerance-based
    if (std::memcmp(a.weights.data(), b.weights.data(),
                    sizeof(double) * a.weights.size()) != 0)
      return false;
    if (std::memcmp(a.biases.data(), b.biases.data(),
                    sizeof(double) * a.biases.size()) != 0)
      return false;
  }
  return true;
}

double mse_loss(const Eigen::MatrixXd& y, const Eigen::MatrixXd& target) {
  if (y.rows() != target.rows() || y.cols() != target.cols())
    throw std::invalid_argument("mse_loss: shape mismatch");
  return (y - target).squaredNorm() / static_cast<double>(y.size());
}

Eigen::MatrixXd mse_loss_grad(const Eigen::MatrixXd& y,
                              const Eigen::MatrixXd& target) {
  if (y.rows() != target.rows() || y.cols() != target.cols())
    throw std::invalid_argument("mse_loss_grad: shape mismatch");
  return 2.0 / static_cast<double>(y.size()) * (y - target);
}

Gradients backward(const DenseNetwork& net, const ForwardCache& cache,
                   const Eigen::MatrixXd& loss_grad) {
  const int n_layers = net.layer_count();
  if (static_cast<int>(cache.activations.size()) != n_layers + 1)
    throw std::invalid_argument("backward: cache does not match this network");
  for (int k = 0; k < n_layers; ++k) {
    if (cache.activations[k].cols() != net.layers()[k].in_dim() ||
        cache.activations[k + 1].cols() != net.layers()[k].out_dim())
      throw std::invalid_argument("backward: cache does not match this network");
  }
  if (loss_grad.rows() != cache.activations.back().rows() ||
      loss_grad.cols() != cache.activations.back().cols())
    throw std::invalid_argument("backward: loss gradient shape mismatch");

  Gradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  Eigen::MatrixXd delta = loss_grad;
  for (int k = n_layers - 1; k >= 0; --k) {
    const DenseLayer& layer = net.layers()[k];
    delta = delta.cwiseProduct(
        activation_grad_from_output(layer.activation, cache.activations[k + 1]));
    g.weights[k] = delta.transpose() * cache.activations[k];
    g.biases[k] = delta.colwise().sum().transpose();
    if (k > 0) delta = (delta * layer.weights).eval();
  }
  return g;
}

namespace {
constexpr char kMagic[8] = {'F', 'I', 'T', 'N', 'E', 'T', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}
}  // namespace

void save_network(const DenseNetwork& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(net.layer_count()));
  for (const auto& l : net.layers()) {
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(l.in_dim()));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(l.out_dim()));
    const std::string name = activation_name(l.activation);
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    // row-major parameter dump
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
        write_pod<double>(os, l.weights(r, c));
    for (Eigen::Index r = 0; r < l.biases.size(); ++r)
      write_pod<double>(os, l.biases(r));
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

DenseNetwork load_network(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic / unsupported version in " +
                             path);
  const auto n_layers = read_pod<std::uint32_t>(is);
  std::vector<DenseLayer> layers(n_layers);
  for (auto& l : layers) {
    const auto in = read_pod<std::uint32_t>(is);
    const auto out = read_pod<std::uint32_t>(is);
    const auto name_len = read_pod<std::uint32_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    l.activation = activation_from_string(name);
    l.weights.resize(out, in);
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
        l.weights(r, c) = read_pod<double>(is);
    l.biases.resize(out);
    for (Eigen::Index r = 0; r < l.biases.size(); ++r)
      l.biases(r) = read_pod<double>(is);
  }
  return DenseNetwork(std::move(layers));
}

}  // namespace fitnn

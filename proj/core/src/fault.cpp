// SPDX-License-Identifier: Apache-2.0
#include "fitnn/fault.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace fitnn {

FaultModel FaultModel::bitflip(const QFormat& fmt) {
  FaultModel m;
  m.kind = Kind::bitflip;
  m.format = fmt;
  return m;
}

FaultModel FaultModel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("FaultModel: gaussian sigma must be > 0");
  FaultModel m;
  m.kind = Kind::gaussian;
  m.sigma = sigma;
  return m;
}

FaultModel FaultModel::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("FaultModel: expected \"bitflip:Q<W>.<F>\" or "
                                "\"gaussian:<sigma>\", got \"" + text + "\"");
  const std::string head = text.substr(0, colon);
  const std::string tail = text.substr(colon + 1);
  if (head == "bitflip") return bitflip(QFormat::parse(tail));
  if (head == "gaussian") {
    std::size_t used = 0;
    double sigma = 0.0;
    try {
      sigma = std::stod(tail, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("FaultModel: bad sigma \"" + tail + "\"");
    }
    if (used != tail.size())
      throw std::invalid_argument("FaultModel: bad sigma \"" + tail + "\"");
    return gaussian(sigma);
  }
  throw std::invalid_argument("FaultModel: unknown kind \"" + head + "\"");
}

std::string FaultModel::str() const {
  if (kind == Kind::bitflip) return "bitflip:" + format.str();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "gaussian:%g", sigma);
  return buf;
}

FaultRate::FaultRate(double r) : per_param_per_sample(r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::invalid_argument("FaultRate: rate must be finite and >= 0");
}

std::int64_t sample_fault_count(FaultRate rate, std::int64_t param_count,
                                std::int64_t batch_size, Rng& rng) {
  if (param_count < 0 || batch_size < 0)
    throw std::invalid_argument("sample_fault_count: negative inputs");
  const double lambda = rate.per_param_per_sample *
                        static_cast<double>(param_count) *
                        static_cast<double>(batch_size);
  if (!std::isfinite(lambda))
    throw std::invalid_argument("sample_fault_count: non-finite intensity");
  if (lambda == 0.0) return 0;
  return rng.poisson(lambda);
}

namespace {

ParamCoord nth_param_of_layer(const DenseLayer& layer, int layer_index,
                              std::int64_t n) {
  const std::int64_t n_weights = layer.weights.size();
  ParamCoord c;
  c.layer = layer_index;
  if (n < n_weights) {
    c.kind = ParamCoord::Kind::weight;
    c.row = static_cast<Eigen::Index>(n / layer.weights.cols());
    c.col = static_cast<Eigen::Index>(n % layer.weights.cols());
  } else {
    c.kind = ParamCoord::Kind::bias;
    c.row = static_cast<Eigen::Index>(n - n_weights);
    c.col = 0;
  }
  return c;
}

}  // namespace

ParamCoord sample_fault_site(const DenseNetwork& net, Rng& rng) {
  const std::int64_t total = net.parameter_count();
  if (total <= 0) throw std::invalid_argument("sample_fault_site: empty network");
  std::int64_t n = static_cast<std::int64_t>(
      rng.uniform_index(static_cast<std::uint64_t>(total)));
  for (int k = 0; k < net.layer_count(); ++k) {
    const std::int64_t here = net.layers()[k].parameter_count();
    if (n < here) return nth_param_of_layer(net.layers()[k], k, n);
    n -= here;
  }
  throw std::logic_error("sample_fault_site: index walked past last layer");
}

ParamCoord sample_fault_site_in_layer(const DenseNetwork& net, int layer,
                                      Rng& rng) {
  if (layer < 0 || layer >= net.layer_count())
    throw std::out_of_range("sample_fault_site_in_layer: bad layer index");
  const DenseLayer& l = net.layers()[layer];
  const std::int64_t n = static_cast<std::int64_t>(
      rng.uniform_index(static_cast<std::uint64_t>(l.parameter_count())));
  return nth_param_of_layer(l, layer, n);
}

FaultEvent inject_bit_flip(DenseNetwork& net, const QFormat& fmt,
                           const ParamCoord& coord, int bit_index) {
  FaultEvent ev;
  ev.coord = coord;
  ev.kind = FaultModel::Kind::bitflip;
  ev.bit_index = bit_index;
  ev.original_value = net.get_param(coord);
  ev.mutated_value = perturb_float(ev.original_value, fmt, bit_index);
  net.set_param(coord, ev.mutated_value);
  return ev;
}

FaultEvent inject_gaussian(DenseNetwork& net, const ParamCoord& coord,
                           double delta) {
  FaultEvent ev;
  ev.coord = coord;
  ev.kind = FaultModel::Kind::gaussian;
  ev.delta = delta;
  ev.original_value = net.get_param(coord);
  ev.mutated_value = ev.original_value + delta;
  net.set_param(coord, ev.mutated_value);
  return ev;
}

FaultEvent inject(DenseNetwork& net, const FaultModel& model,
                  const ParamCoord& coord, Rng& rng) {
  if (model.kind == FaultModel::Kind::bitflip) {
    const int bit = static_cast<int>(
        rng.uniform_index(static_cast<std::uint64_t>(model.format.width)));
    return inject_bit_flip(net, model.format, coord, bit);
  }
  return inject_gaussian(net, coord, rng.normal(model.sigma));
}

void revert(DenseNetwork& net, std::span<const FaultEvent> events) {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    const double current = net.get_param(it->coord);
    // Bitwise equality: the parameter must still hold what this event wrote.
    if (std::memcmp(&current, &it->mutated_value, sizeof(double)) != 0)
      throw std::logic_error("revert: parameter changed since injection, "
                             "fault ledger is corrupted");
    net.set_param(it->coord, it->original_value);
  }
}

}  // namespace fitnn

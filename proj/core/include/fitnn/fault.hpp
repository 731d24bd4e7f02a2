// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fitnn/network.hpp"
#include "fitnn/qformat.hpp"
#include "fitnn/rng.hpp"

namespace fitnn {

// Transient-fault model applied to a single parameter. Config syntax:
// "bitflip:Q16.12" or "gaussian:0.01".
struct FaultModel {
  enum class Kind { bitflip, gaussian };

  Kind kind = Kind::gaussian;
  QFormat format = QFormat::from_width_frac(16, 12);  // bitflip only
  double sigma = 0.01;                                // gaussian only

  static FaultModel bitflip(const QFormat& fmt);
  static FaultModel gaussian(double sigma);
  static FaultModel parse(const std::string& text);
  std::string str() const;
};

// Average number of faults per parameter per processed sample. Together with
// the parameter count and the batch size this sets the Poisson intensity.
struct FaultRate {
  double per_param_per_sample = 0.0;

  explicit FaultRate(double r);
  FaultRate() = default;
};

// One injected fault, recorded so it can be undone bit-exactly.
struct FaultEvent {
  ParamCoord coord;
  double original_value = 0.0;
  double mutated_value = 0.0;
  FaultModel::Kind kind = FaultModel::Kind::gaussian;
  int bit_index = -1;   // bitflip
  double delta = 0.0;   // gaussian
};

// Number of faults for one batch: Poisson with
// lambda = rate * param_count * batch_size.
std::int64_t sample_fault_count(FaultRate rate, std::int64_t param_count,
                                std::int64_t batch_size, Rng& rng);

// Uniform over every scalar parameter of the network, weights and biases
// pooled together.
ParamCoord sample_fault_site(const DenseNetwork& net, Rng& rng);

// Uniform over the scalar parameters of one layer.
ParamCoord sample_fault_site_in_layer(const DenseNetwork& net, int layer,
                                      Rng& rng);

// Applies the model at the coordinate (bitflip: uniform bit position;
// gaussian: additive zero-mean delta) and returns the revert record.
FaultEvent inject(DenseNetwork& net, const FaultModel& model,
                  const ParamCoord& coord, Rng& rng);

// Deterministic bit-flip at a fixed position; inject() delegates here after
// drawing the position.
FaultEvent inject_bit_flip(DenseNetwork& net, const QFormat& fmt,
                           const ParamCoord& coord, int bit_index);

FaultEvent inject_gaussian(DenseNetwork& net, const ParamCoord& coord,
                           double delta);

// Undoes the events in reverse order (faults may stack on one coordinate).
// Throws if the network does not carry the value an event claims to have
// written, which signals a corrupted ledger.
void revert(DenseNetwork& net, std::span<const FaultEvent> events);

}  // namespace fitnn

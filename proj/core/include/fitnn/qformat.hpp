// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace fitnn {

// Signed two's-complement fixed-point format: one sign bit, `int_bits`
// integer bits and `frac_bits` fractional bits (width = 1 + I + F).
// Rendered in configs as "Q<width>.<frac>", e.g. Q16.12 => W=16, F=12, I=3.
struct QFormat {
  int width;
  int int_bits;
  int frac_bits;

  QFormat(int w, int i, int f);

  static QFormat from_width_frac(int w, int f) { return {w, w - 1 - f, f}; }
  static QFormat parse(const std::string& text);
  std::string str() const;

  std::int64_t max_raw() const {
    return static_cast<std::int64_t>((std::uint64_t{1} << (width - 1)) - 1);
  }
  std::int64_t min_raw() const { return -max_raw() - 1; }

  friend bool operator==(const QFormat&, const QFormat&) = default;
};

// A raw two's-complement word plus its format. The represented real number
// is raw * 2^-F.
struct FixedValue {
  std::int64_t raw;
  QFormat format;

  double value() const;
};

// Rounds half away from zero, then saturates into the W-bit signed range.
// Throws std::invalid_argument for non-finite inputs.
FixedValue quantize(double x, const QFormat& fmt);

double dequantize(const FixedValue& v);

// Toggles one bit of the raw word; bit width-1 is the sign bit.
FixedValue flip_bit(const FixedValue& v, int bit_index);

// quantize -> flip_bit -> dequantize. This is the full path a bit-flip fault
// takes when it hits a parameter stored as a float in the simulation.
double perturb_float(double x, const QFormat& fmt, int bit_index);

}  // namespace fitnn

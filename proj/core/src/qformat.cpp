// SPDX-License-Identifier: Apache-2.0
#include "fitnn/qformat.hpp"

#include <cmath>
#include <charconv>
#include <stdexcept>

namespace fitnn {

QFormat::QFormat(int w, int i, int f) : width(w), int_bits(i), frac_bits(f) {
  if (w < 1 || w > 64 || i < 0 || f < 0 || w != 1 + i + f)
    throw std::invalid_argument("QFormat: need 1 <= W <= 64 and W = 1+I+F, got W=" +
                                std::to_string(w) + " I=" + std::to_string(i) +
                                " F=" + std::to_string(f));
}

QFormat QFormat::parse(const std::string& text) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin == end || *begin != 'Q')
    throw std::invalid_argument("QFormat: expected \"Q<W>.<F>\", got \"" + text + "\"");
  int w = 0;
  auto r = std::from_chars(begin + 1, end, w);
  if (r.ec != std::errc{} || r.ptr == end || *r.ptr != '.')
    throw std::invalid_argument("QFormat: expected \"Q<W>.<F>\", got \"" + text + "\"");
  int f = 0;
  auto r2 = std::from_chars(r.ptr + 1, end, f);
  if (r2.ec != std::errc{} || r2.ptr != end)
    throw std::invalid_argument("QFormat: expected \"Q<W>.<F>\", got \"" + text + "\"");
  return from_width_frac(w, f);
}

std::string QFormat::str() const {
  return "Q" + std::to_string(width) + "." + std::to_string(frac_bits);
}

double FixedValue::value() const {
  return std::ldexp(static_cast<double>(raw), -format.frac_bits);
}

FixedValue quantize(double x, const QFormat& fmt) {
  if (!std::isfinite(x))
    throw std::invalid_argument("quantize: input must be finite");
  // long double keeps the scaled value exact for any width up to 64 bits.
  const long double scaled = std::ldexpl(static_cast<long double>(x), fmt.frac_bits);
  const long double rounded = std::roundl(scaled);  // half away from zero
  std::int64_t raw;
  if (rounded >= static_cast<long double>(fmt.max_raw()))
    raw = fmt.max_raw();
  else if (rounded <= static_cast<long double>(fmt.min_raw()))
    raw = fmt.min_raw();
  else
    raw = static_cast<std::int64_t>(rounded);
  return {raw, fmt};
}

double dequantize(const FixedValue& v) { return v.value(); }

FixedValue flip_bit(const FixedValue& v, int bit_index) {
  const int w = v.format.width;
  if (bit_index < 0 || bit_index >= w)
    throw std::out_of_range("flip_bit: bit index " + std::to_string(bit_index) +
                            " outside [0, " + std::to_string(w) + ")");
  std::uint64_t u = static_cast<std::uint64_t>(v.raw);
  u ^= std::uint64_t{1} << bit_index;
  // Reinterpret the low W bits as a signed word.
  const int shift = 64 - w;
  const std::int64_t raw =
      static_cast<std::int64_t>(u << shift) >> shift;
  return {raw, v.format};
}

double perturb_float(double x, const QFormat& fmt, int bit_index) {
  return dequantize(flip_bit(quantize(x, fmt), bit_index));
}

}  // namespace fitnn

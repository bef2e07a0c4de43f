// SPDX-License-Identifier: Apache-2.0
#include "fibergan/sigproc.hpp"

#include <cmath>
#include <numbers>

#include "fibergan/errors.hpp"
#include "fibergan/rng.hpp"

namespace fibergan {

namespace {

constexpr double kInvSqrt10 = 0.31622776601683794;  // 1/sqrt(10)

// Gray order 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
inline double gray_level(std::uint8_t b_hi, std::uint8_t b_lo) {
  if (!b_hi) return b_lo ? -1.0 : -3.0;
  return b_lo ? +1.0 : +3.0;
}

// Decision thresholds at -2, 0, +2 (pre-scaling); exact boundary values
// resolve toward the lower level.
inline int decide_level(double x) {
  if (x <= -2.0) return -3;
  if (x <= 0.0) return -1;
  if (x <= 2.0) return +1;
  return +3;
}

inline void level_to_bits(int level, std::uint8_t& b_hi, std::uint8_t& b_lo) {
  switch (level) {
    case -3: b_hi = 0; b_lo = 0; break;
    case -1: b_hi = 0; b_lo = 1; break;
    case +1: b_hi = 1; b_lo = 1; break;
    default: b_hi = 1; b_lo = 0; break;
  }
}

}  // namespace

void validate(const TxConfig& cfg) {
  if (cfg.sps < 2) throw ConfigError("sps must be >= 2");
  if (!(cfg.symbol_rate_baud > 0.0)) throw ConfigError("symbol rate must be positive");
  if (!(cfg.rolloff > 0.0 && cfg.rolloff <= 1.0)) throw ConfigError("rolloff must be in (0, 1]");
  if (cfg.rrc_span_symbols <= 0 || cfg.rrc_span_symbols % 2 != 0)
    throw ConfigError("rrc span must be a positive even symbol count");
}

BitStream random_bits(std::size_t count, std::uint64_t seed) {
  BitStream bits(count);
  SplitMix64 rng(seed);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

ArrayXcd map_bits_to_qam16(const BitStream& bits) {
  if (bits.size() % 4 != 0) throw ShapeError("bit count must be divisible by 4");
  const std::size_t n = bits.size() / 4;
  ArrayXcd symbols(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double i_level = gray_level(bits[4 * k], bits[4 * k + 1]);
    const double q_level = gray_level(bits[4 * k + 2], bits[4 * k + 3]);
    symbols[static_cast<Eigen::Index>(k)] =
        Complex(i_level * kInvSqrt10, q_level * kInvSqrt10);
  }
  return symbols;
}

BitStream demap_qam16(const ArrayXcd& symbols) {
  BitStream bits(static_cast<std::size_t>(symbols.size()) * 4);
  for (Eigen::Index k = 0; k < symbols.size(); ++k) {
    const int i_level = decide_level(symbols[k].real() / kInvSqrt10);
    const int q_level = decide_level(symbols[k].imag() / kInvSqrt10);
    level_to_bits(i_level, bits[4 * k], bits[4 * k + 1]);
    level_to_bits(q_level, bits[4 * k + 2], bits[4 * k + 3]);
  }
  return bits;
}

ComplexSignal upsample(const ArrayXcd& symbols, int sps, double symbol_rate_baud) {
  if (sps < 2) throw ConfigError("sps must be >= 2");
  ArrayXcd out = ArrayXcd::Zero(symbols.size() * sps);
  for (Eigen::Index k = 0; k < symbols.size(); ++k) out[k * sps] = symbols[k];
  return {std::move(out), symbol_rate_baud * sps};
}

ArrayXd rrc_taps(double rolloff, int span_symbols, int sps) {
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ConfigError("rolloff must be in (0, 1]");
  if (span_symbols <= 0 || span_symbols % 2 != 0)
    throw ConfigError("span must be a positive even symbol count");
  const Eigen::Index n = static_cast<Eigen::Index>(span_symbols) * sps + 1;
  const Eigen::Index center = (n - 1) / 2;
  ArrayXd taps(n);
  const double pi = std::numbers::pi;
  const double b = rolloff;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k - center) / sps;  // in symbol periods
    double h;
    if (t == 0.0) {
      h = 1.0 - b + 4.0 * b / pi;
    } else if (std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-12) {
      h = (b / std::numbers::sqrt2) *
          ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) +
           (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
    } else {
      const double num = std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b));
      const double den = pi * t * (1.0 - 16.0 * b * b * t * t);
      h = num / den;
    }
    taps[k] = h;
  }
  taps /= std::sqrt(taps.square().sum());
  return taps;
}

ComplexSignal fir_filter(const ComplexSignal& signal, const ArrayXd& taps) {
  if (taps.size() == 0) throw ShapeError("empty tap vector");
  const Eigen::Index n = signal.samples.size();
  const Eigen::Index m = taps.size();
  const Eigen::Index delay = (m - 1) / 2;
  ArrayXcd out = ArrayXcd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // out[i] = sum_j taps[j] * x[i + delay - j] over valid x indices
    const Eigen::Index shift = i + delay;
    const Eigen::Index j_lo = std::max<Eigen::Index>(0, shift - (n - 1));
    const Eigen::Index j_hi = std::min<Eigen::Index>(m - 1, shift);
    Complex acc(0.0, 0.0);
    for (Eigen::Index j = j_lo; j <= j_hi; ++j) acc += taps[j] * signal.samples[shift - j];
    out[i] = acc;
  }
  return {std::move(out), signal.sample_rate_hz};
}

ComplexSignal set_average_power(const ComplexSignal& signal, double power_dbm) {
  const double current = mean_power_w(signal);
  if (!(current > 0.0)) throw DegenerateInputError("cannot normalize an all-zero signal");
  const double target_w = std::pow(10.0, power_dbm / 10.0) / 1000.0;
  const double factor = std::sqrt(target_w / current);
  return {signal.samples * factor, signal.sample_rate_hz};
}

ArrayXcd downsample(const ComplexSignal& signal, int sps, int phase_offset) {
  if (phase_offset < 0 || phase_offset >= sps)
    throw ConfigError("phase offset must be in [0, sps)");
  const Eigen::Index n = signal.samples.size();
  const Eigen::Index count = (n - phase_offset + sps - 1) / sps;
  ArrayXcd out(count);
  for (Eigen::Index k = 0; k < count; ++k) out[k] = signal.samples[phase_offset + k * sps];
  return out;
}

BitErrorCount count_bit_errors(const BitStream& tx_bits, const BitStream& rx_bits) {
  if (tx_bits.size() != rx_bits.size()) throw ShapeError("bit stream lengths differ");
  BitErrorCount result;
  result.total = tx_bits.size();
  for (std::size_t i = 0; i < tx_bits.size(); ++i)
    if (tx_bits[i] != rx_bits[i]) ++result.errors;
  result.ber = result.total ? static_cast<double>(result.errors) / result.total : 0.0;
  return result;
}

ComplexSignal tx_waveform(const BitStream& bits, const TxConfig& cfg) {
  validate(cfg);
  const ArrayXcd symbols = map_bits_to_qam16(bits);
  const ComplexSignal up = upsample(symbols, cfg.sps, cfg.symbol_rate_baud);
  const ArrayXd taps = rrc_taps(cfg.rolloff, cfg.rrc_span_symbols, cfg.sps);
  const ComplexSignal shaped = fir_filter(up, taps);
  return set_average_power(shaped, cfg.launch_power_dbm);
}

}  // namespace fibergan

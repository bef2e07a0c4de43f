// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_SIGPROC_HPP
#define FIBERGAN_SIGPROC_HPP

#include <cstdint>
#include <vector>

#include "fibergan/signal.hpp"

namespace fibergan {

// Transmitter settings: 16QAM at 30 GBaud, 4 samples/symbol, RRC shaping,
// launch power in dBm.
struct TxConfig {
  double symbol_rate_baud = 3.0e10;
  int sps = 4;
  double rolloff = 0.1;
  int rrc_span_symbols = 32;  // filter covers this many symbols; tap count span*sps+1
  double launch_power_dbm = 10.0;
  std::uint64_t seed = 1;

  double sample_rate_hz() const { return symbol_rate_baud * sps; }
};

void validate(const TxConfig& cfg);

using BitStream = std::vector<std::uint8_t>;

// Seeded uniform bits; reproducible from (seed, count).
BitStream random_bits(std::size_t count, std::uint64_t seed);

// Gray-coded 16QAM, first two bits -> I level, last two -> Q level,
// levels {-3,-1,+1,+3}/sqrt(10) in Gray order 00,01,11,10. Unit mean
// symbol energy over the full constellation.
ArrayXcd map_bits_to_qam16(const BitStream& bits);

// Hard nearest-point decision, inverse of the Gray table; ties between
// adjacent levels resolve toward the lower level.
BitStream demap_qam16(const ArrayXcd& symbols);

// Zero insertion: out[k*sps] = symbols[k], other samples zero.
ComplexSignal upsample(const ArrayXcd& symbols, int sps, double symbol_rate_baud);

// Unit-energy root-raised-cosine taps, span_symbols*sps+1 of them, with the
// removable singularities at t=0 and t=+-T/(4*rolloff) evaluated by their
// analytic limits.
ArrayXd rrc_taps(double rolloff, int span_symbols, int sps);

// Linear convolution with "same" alignment: output length equals input
// length, group delay (taps-1)/2 removed.
ComplexSignal fir_filter(const ComplexSignal& signal, const ArrayXd& taps);

// Scales by one positive real factor so mean |x|^2 hits the dBm target.
ComplexSignal set_average_power(const ComplexSignal& signal, double power_dbm);

// Samples at indices phase_offset + k*sps.
ArrayXcd downsample(const ComplexSignal& signal, int sps, int phase_offset);

struct BitErrorCount {
  std::size_t errors = 0;
  std::size_t total = 0;
  double ber = 0.0;
};

BitErrorCount count_bit_errors(const BitStream& tx_bits, const BitStream& rx_bits);

// Full transmit chain: bits -> 16QAM -> upsample -> RRC -> launch power.
ComplexSignal tx_waveform(const BitStream& bits, const TxConfig& cfg);

}  // namespace fibergan

#endif

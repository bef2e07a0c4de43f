// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_RXDSP_HPP
#define FIBERGAN_RXDSP_HPP

#include "fibergan/fiber.hpp"
#include "fibergan/sigproc.hpp"

namespace fibergan {

enum class DspMode { none, cd_only, dbp };

struct DspConfig {
  DspMode mode = DspMode::dbp;
  // Inverse-propagation step density; 100/km mirrors the forward default.
  double dbp_steps_per_km = 100.0;
};

void validate(const DspConfig& cfg);

DspMode dsp_mode_from_string(const std::string& name);
std::string to_string(DspMode mode);

// One-pass frequency-domain compensation exp(-i*(beta2/2)*w^2*L), the exact
// inverse of the accumulated linear dispersion over length_m.
ComplexSignal cd_compensate(const ComplexSignal& signal, double beta2_s2_m, double length_m);

// Reverse symmetric split-step with negated beta2/gamma and inverse
// attenuation. With steps matching the forward run and noise off this
// recovers the channel input.
ComplexSignal dbp(const ComplexSignal& signal, const FiberParams& params, double steps_per_km);

struct AlignResult {
  ArrayXcd symbols;  // rx scaled by the least-squares factor
  BitStream bits;
  Complex scale;
};

// Single complex least-squares factor a = <rx,ref>/<rx,rx> applied to rx
// (fixes residual constant phase/scale), then hard 16QAM decision.
AlignResult align_and_decide(const ArrayXcd& rx_symbols, const ArrayXcd& ref_symbols);

struct RxResult {
  BitStream bits;          // decisions over the evaluated symbols
  BitErrorCount count;
  ArrayXcd constellation;  // aligned symbols the decisions were made on
};

// Shared receiver chain applied identically to channel and surrogate data:
// per-mode compensation at full rate, matched RRC, symbol-instant
// downsampling, least-squares alignment, hard decision, bit count.
// edge_discard_symbols are dropped from each end before alignment/counting.
RxResult run_rx_chain(const ComplexSignal& rx, const DspConfig& dsp, const TxConfig& tx,
                      const FiberParams& params, const BitStream& ref_bits,
                      int edge_discard_symbols = 0);

}  // namespace fibergan

#endif

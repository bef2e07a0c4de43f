// SPDX-License-Identifier: Apache-2.0
#include "fibergan/rxdsp.hpp"

#include <algorithm>
#include <cmath>

#include "fibergan/errors.hpp"
#include "fibergan/fft.hpp"

namespace fibergan {

void validate(const DspConfig& cfg) {
  if (cfg.mode == DspMode::dbp && !(cfg.dbp_steps_per_km > 0.0))
    throw ConfigError("dbp step density must be positive");
}

DspMode dsp_mode_from_string(const std::string& name) {
  if (name == "none") return DspMode::none;
  if (name == "cd" || name == "cd_only") return DspMode::cd_only;
  if (name == "dbp") return DspMode::dbp;
  throw ConfigError("unknown dsp mode: " + name);
}

std::string to_string(DspMode mode) {
  switch (mode) {
    case DspMode::none: return "none";
    case DspMode::cd_only: return "cd_only";
    default: return "dbp";
  }
}

ComplexSignal cd_compensate(const ComplexSignal& signal, double beta2_s2_m, double length_m) {
  if (!is_power_of_two(signal.samples.size()))
    throw ShapeError("cd compensation needs a power-of-two length");
  const ArrayXd omega = fft_omega(signal.samples.size(), signal.sample_rate_hz);
  const ArrayXd phase = (-0.5 * beta2_s2_m * length_m) * omega.square();
  ArrayXcd factor(omega.size());
  factor.real() = phase.cos();
  factor.imag() = phase.sin();
  ArrayXcd spectrum = fft(signal.samples);
  spectrum *= factor;
  return {ifft(spectrum), signal.sample_rate_hz};
}

ComplexSignal dbp(const ComplexSignal& signal, const FiberParams& params, double steps_per_km) {
  if (!(steps_per_km > 0.0)) throw ConfigError("dbp step density must be positive");
  if (!is_power_of_two(signal.samples.size()))
    throw ShapeError("dbp needs a power-of-two length");
  if (params.length_km <= 0.0) return signal;
  FiberParams grid = params;
  grid.step_km = std::min(1.0 / steps_per_km, params.length_km);
  validate(grid);

  std::vector<double> sizes = ssfm_step_sizes_m(grid);
  std::reverse(sizes.begin(), sizes.end());

  ArrayXcd a = signal.samples;
  split_step_chain_inplace(a, sizes, params.beta2_s2_m(), params.gamma_per_w_m(),
                           params.alpha_power_per_m(), signal.sample_rate_hz, true);
  return {std::move(a), signal.sample_rate_hz};
}

AlignResult align_and_decide(const ArrayXcd& rx_symbols, const ArrayXcd& ref_symbols) {
  if (rx_symbols.size() != ref_symbols.size()) throw ShapeError("symbol count mismatch");
  if (rx_symbols.size() < 64) throw ShapeError("alignment needs at least 64 symbols");
  const Complex num = (rx_symbols.conjugate() * ref_symbols).sum();
  const double den = rx_symbols.abs2().sum();
  if (!(den > 0.0)) throw DegenerateInputError("all-zero receive symbols");
  AlignResult result;
  result.scale = num / den;
  result.symbols = rx_symbols * result.scale;
  result.bits = demap_qam16(result.symbols);
  return result;
}

RxResult run_rx_chain(const ComplexSignal& rx, const DspConfig& dsp, const TxConfig& tx,
                      const FiberParams& params, const BitStream& ref_bits,
                      int edge_discard_symbols) {
  validate(dsp);
  validate(tx);
  if (ref_bits.size() % 4 != 0) throw ShapeError("reference bit count must be divisible by 4");

  // Nonlinear compensation runs at the full sample rate, ahead of the
  // matched filter; plain CD compensation is linear so its slot is free.
  ComplexSignal stage = rx;
  if (dsp.mode == DspMode::dbp) stage = dbp(stage, params, dsp.dbp_steps_per_km);
  stage = fir_filter(stage, rrc_taps(tx.rolloff, tx.rrc_span_symbols, tx.sps));
  if (dsp.mode == DspMode::cd_only)
    stage = cd_compensate(stage, params.beta2_s2_m(), params.length_m());

  const ArrayXcd all_symbols = downsample(stage, tx.sps, 0);
  const ArrayXcd ref_all = map_bits_to_qam16(ref_bits);
  const Eigen::Index n_sym = std::min(all_symbols.size(), ref_all.size());
  const Eigen::Index d = edge_discard_symbols;
  if (d < 0 || 2 * d >= n_sym) throw ConfigError("edge discard leaves no symbols");
  const Eigen::Index interior = n_sym - 2 * d;

  const ArrayXcd rx_interior = all_symbols.segment(d, interior);
  const ArrayXcd ref_interior = ref_all.segment(d, interior);
  AlignResult aligned = align_and_decide(rx_interior, ref_interior);

  BitStream ref_interior_bits(ref_bits.begin() + 4 * d, ref_bits.begin() + 4 * (d + interior));
  RxResult result;
  result.count = count_bit_errors(ref_interior_bits, aligned.bits);
  result.bits = std::move(aligned.bits);
  result.constellation = std::move(aligned.symbols);
  return result;
}

}  // namespace fibergan

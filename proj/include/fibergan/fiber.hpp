// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_FIBER_HPP
#define FIBERGAN_FIBER_HPP

#include <cstdint>
#include <vector>

#include "fibergan/signal.hpp"

namespace fibergan {

// Physical link description consumed by the split-step solver and by DBP.
struct FiberParams {
  double length_km = 50.0;
  double step_km = 0.01;
  double dispersion_ps_nm_km = 16.75;
  double gamma_per_w_km = 1.3;
  double alpha_db_km = 0.2;
  double wavelength_nm = 1550.0;

  double beta2_s2_m() const;        // from D and wavelength
  double gamma_per_w_m() const { return gamma_per_w_km * 1e-3; }
  double alpha_power_per_m() const;  // power attenuation coefficient
  double length_m() const { return length_km * 1e3; }
};

void validate(const FiberParams& params);

// Receiver-side additive Gaussian noise, applied once at the channel output.
struct NoiseConfig {
  bool enabled = true;
  double snr_db = 26.0;
  std::uint64_t seed = 1;
};

// beta2 = -D*lambda^2/(2*pi*c) in s^2/m, D given in ps/nm/km.
double beta2_from_dispersion(double dispersion_ps_nm_km, double wavelength_nm);

// dB/km to the power attenuation coefficient in 1/m.
double alpha_power_per_m_from_db_km(double alpha_db_km);

// Frequency-domain all-pass X(w) <- X(w) * exp(i*(beta2/2)*w^2*dz).
ComplexSignal dispersion_step(const ComplexSignal& signal, double beta2_s2_m, double dz_m);

// Per-sample rotation A <- A * exp(i*gamma*|A|^2*dz_eff) * exp(-alpha*dz/2),
// dz_eff = (1 - e^{-alpha*dz})/alpha (== dz at alpha = 0).
ComplexSignal nonlinear_step(const ComplexSignal& signal, double gamma_per_w_m, double dz_m,
                             double alpha_power_per_m);

// Step sizes in meters: full steps of step_km plus a possibly short tail.
std::vector<double> ssfm_step_sizes_m(const FiberParams& params);

// Merged-half-step Strang chain shared by the forward solver and DBP:
//   H(s0/2) N(s0) H((s0+s1)/2) N(s1) ... N(s_last) H(s_last/2).
// With inverse set, every dispersion phase is negated and the nonlinear
// sub-step is replaced by its exact inverse; passing the forward size
// sequence reversed then undoes a forward chain step by step.
void split_step_chain_inplace(ArrayXcd& samples, const std::vector<double>& step_sizes_m,
                              double beta2_s2_m, double gamma_per_w_m, double alpha_per_m,
                              double sample_rate_hz, bool inverse);

// Symmetric split-step solution over the whole link; adds output noise when
// noise.enabled. Deterministic given the noise seed.
ComplexSignal propagate_ssfm(const ComplexSignal& signal, const FiberParams& params,
                             const NoiseConfig& noise);

// i.i.d. circular complex Gaussian noise at the requested SNR relative to
// the signal's mean power.
ComplexSignal add_awgn(const ComplexSignal& signal, double snr_db, std::uint64_t seed);

}  // namespace fibergan

#endif

// SPDX-License-Identifier: Apache-2.0
#include "fibergan/fiber.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "fibergan/errors.hpp"
#include "fibergan/fft.hpp"
#include "fibergan/rng.hpp"

namespace fibergan {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s

double effective_length_m(double dz_m, double alpha_per_m) {
  if (alpha_per_m == 0.0) return dz_m;
  return (1.0 - std::exp(-alpha_per_m * dz_m)) / alpha_per_m;
}

// Spectral multiplier exp(i*(beta2/2)*w^2*l).
ArrayXcd dispersion_factor(const ArrayXd& omega, double beta2, double l_m) {
  const ArrayXd phase = (0.5 * beta2 * l_m) * omega.square();
  ArrayXcd factor(omega.size());
  factor.real() = phase.cos();
  factor.imag() = phase.sin();
  return factor;
}

// Phase from the amplitude entering the step, attenuation applied after.
void nonlinear_inplace(ArrayXcd& a, double gamma_per_w_m, double dz_m, double alpha_per_m) {
  if (gamma_per_w_m != 0.0) {
    const ArrayXd phase = (gamma_per_w_m * effective_length_m(dz_m, alpha_per_m)) * a.abs2();
    ArrayXcd rot(a.size());
    rot.real() = phase.cos();
    rot.imag() = phase.sin();
    a *= rot;
  }
  if (alpha_per_m != 0.0) a *= std::exp(-0.5 * alpha_per_m * dz_m);
}

// Exact inverse of the above: undo the attenuation first so the phase is
// computed from the amplitude the forward step saw.
void inverse_nonlinear_inplace(ArrayXcd& a, double gamma_per_w_m, double dz_m,
                               double alpha_per_m) {
  if (alpha_per_m != 0.0) a *= std::exp(+0.5 * alpha_per_m * dz_m);
  if (gamma_per_w_m != 0.0) {
    const ArrayXd phase = (-gamma_per_w_m * effective_length_m(dz_m, alpha_per_m)) * a.abs2();
    ArrayXcd rot(a.size());
    rot.real() = phase.cos();
    rot.imag() = phase.sin();
    a *= rot;
  }
}

// Tiny by-value cache; a chain has at most three distinct gap lengths.
class FactorCache {
 public:
  FactorCache(const ArrayXd& omega, double beta2) : omega_(omega), beta2_(beta2) {}

  const ArrayXcd& get(double l_m) {
    for (const auto& entry : entries_)
      if (entry.first == l_m) return entry.second;
    entries_.emplace_back(l_m, dispersion_factor(omega_, beta2_, l_m));
    return entries_.back().second;
  }

 private:
  const ArrayXd& omega_;
  double beta2_;
  std::vector<std::pair<double, ArrayXcd>> entries_;
};
}  // namespace

double beta2_from_dispersion(double dispersion_ps_nm_km, double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw ConfigError("wavelength must be positive");
  const double d_si = dispersion_ps_nm_km * 1e-6;  // s/m^2
  const double lambda_m = wavelength_nm * 1e-9;
  return -d_si * lambda_m * lambda_m / (2.0 * std::numbers::pi * kSpeedOfLight);
}

double alpha_power_per_m_from_db_km(double alpha_db_km) {
  return alpha_db_km * std::numbers::ln10 / 10.0 / 1000.0;
}

double FiberParams::beta2_s2_m() const {
  return beta2_from_dispersion(dispersion_ps_nm_km, wavelength_nm);
}

double FiberParams::alpha_power_per_m() const {
  return alpha_power_per_m_from_db_km(alpha_db_km);
}

void validate(const FiberParams& params) {
  if (params.length_km < 0.0) throw ConfigError("fiber length must be >= 0");
  if (!(params.step_km > 0.0)) throw ConfigError("step size must be positive");
  if (params.length_km > 0.0 && params.step_km > params.length_km + 1e-12)
    throw ConfigError("step size exceeds fiber length");
  if (params.gamma_per_w_km < 0.0) throw ConfigError("gamma must be >= 0");
  if (params.alpha_db_km < 0.0) throw ConfigError("alpha must be >= 0");
  if (!(params.wavelength_nm > 0.0)) throw ConfigError("wavelength must be positive");
}

ComplexSignal dispersion_step(const ComplexSignal& signal, double beta2_s2_m, double dz_m) {
  if (!is_power_of_two(signal.samples.size()))
    throw ShapeError("dispersion step needs a power-of-two length");
  const ArrayXd omega = fft_omega(signal.samples.size(), signal.sample_rate_hz);
  ArrayXcd spectrum = fft(signal.samples);
  spectrum *= dispersion_factor(omega, beta2_s2_m, dz_m);
  return {ifft(spectrum), signal.sample_rate_hz};
}

ComplexSignal nonlinear_step(const ComplexSignal& signal, double gamma_per_w_m, double dz_m,
                             double alpha_per_m) {
  ArrayXcd a = signal.samples;
  nonlinear_inplace(a, gamma_per_w_m, dz_m, alpha_per_m);
  return {std::move(a), signal.sample_rate_hz};
}

std::vector<double> ssfm_step_sizes_m(const FiberParams& params) {
  std::vector<double> sizes;
  if (params.length_km <= 0.0) return sizes;
  const double q = params.length_km / params.step_km;
  const auto n = static_cast<std::size_t>(std::ceil(q - 1e-9));
  sizes.assign(n, params.step_km * 1e3);
  const double tail_km = params.length_km - static_cast<double>(n - 1) * params.step_km;
  sizes.back() = std::max(tail_km, 0.0) * 1e3;
  return sizes;
}

void split_step_chain_inplace(ArrayXcd& samples, const std::vector<double>& step_sizes_m,
                              double beta2_s2_m, double gamma_per_w_m, double alpha_per_m,
                              double sample_rate_hz, bool inverse) {
  if (step_sizes_m.empty()) return;
  if (!is_power_of_two(samples.size()))
    throw ShapeError("split-step chain needs a power-of-two length");

  // Strang splitting with consecutive half steps merged:
  //   H(s0/2) N(s0) H((s0+s1)/2) N(s1) ... N(s_last) H(s_last/2)
  // The inverse flag negates every dispersion phase and swaps the nonlinear
  // sub-step for its exact inverse; the caller supplies the sizes already in
  // the order they should be consumed.
  if (beta2_s2_m == 0.0) {
    // Dispersion is the identity: keep the run purely point-wise so sample
    // magnitudes carry no transform rounding.
    for (const double s : step_sizes_m) {
      if (inverse)
        inverse_nonlinear_inplace(samples, gamma_per_w_m, s, alpha_per_m);
      else
        nonlinear_inplace(samples, gamma_per_w_m, s, alpha_per_m);
    }
    return;
  }
  const double sign = inverse ? -1.0 : 1.0;
  const ArrayXd omega = fft_omega(samples.size(), sample_rate_hz);
  FactorCache cache(omega, sign * beta2_s2_m);
  const FftPlan plan(samples.size());
  const std::size_t n = step_sizes_m.size();

  plan.forward_inplace(samples);
  samples *= cache.get(0.5 * step_sizes_m.front());
  plan.inverse_inplace(samples);
  for (std::size_t i = 0; i < n; ++i) {
    if (inverse)
      inverse_nonlinear_inplace(samples, gamma_per_w_m, step_sizes_m[i], alpha_per_m);
    else
      nonlinear_inplace(samples, gamma_per_w_m, step_sizes_m[i], alpha_per_m);
    const double gap = (i + 1 < n) ? 0.5 * (step_sizes_m[i] + step_sizes_m[i + 1])
                                   : 0.5 * step_sizes_m[i];
    plan.forward_inplace(samples);
    samples *= cache.get(gap);
    plan.inverse_inplace(samples);
  }
}

ComplexSignal propagate_ssfm(const ComplexSignal& signal, const FiberParams& params,
                             const NoiseConfig& noise) {
  validate(params);
  validate(signal);
  if (!is_power_of_two(signal.samples.size()))
    throw ShapeError("propagation needs a power-of-two length");

  ArrayXcd a = signal.samples;
  split_step_chain_inplace(a, ssfm_step_sizes_m(params), params.beta2_s2_m(),
                           params.gamma_per_w_m(), params.alpha_power_per_m(),
                           signal.sample_rate_hz, false);

  ComplexSignal out{std::move(a), signal.sample_rate_hz};
  if (noise.enabled && std::isfinite(noise.snr_db))
    out = add_awgn(out, noise.snr_db, noise.seed);
  return out;
}

ComplexSignal add_awgn(const ComplexSignal& signal, double snr_db, std::uint64_t seed) {
  const double power = mean_power_w(signal);
  if (!(power > 0.0)) throw DegenerateInputError("cannot add noise to an all-zero signal");
  if (!std::isfinite(snr_db)) return signal;  // +inf sentinel: noiseless
  const double noise_var = power / std::pow(10.0, snr_db / 10.0);
  const double sigma_component = std::sqrt(noise_var / 2.0);
  SplitMix64 rng(seed);
  ArrayXcd out = signal.samples;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    out[i] += Complex(sigma_component * re, sigma_component * im);
  }
  return {std::move(out), signal.sample_rate_hz};
}

}  // namespace fibergan

// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fibergan/errors.hpp"
#include "fibergan/fft.hpp"
#include "fibergan/fiber.hpp"
#include "fibergan/rng.hpp"
#include "fibergan/sigproc.hpp"
#include "support/reference.hpp"

using namespace fibergan;

namespace {
const NoiseConfig kNoNoise{false, 0.0, 0};

ComplexSignal random_waveform(Eigen::Index n, double rate, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ArrayXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = 0.1 * Complex(rng.gaussian(), rng.gaussian());
  return {std::move(x), rate};
}

ComplexSignal gaussian_pulse(Eigen::Index n, double dt_s, double t0_s, double peak_sqrt_w) {
  ArrayXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(n) / 2.0) * dt_s;
    x[i] = Complex(peak_sqrt_w * std::exp(-t * t / (2.0 * t0_s * t0_s)), 0.0);
  }
  return {std::move(x), 1.0 / dt_s};
}
}  // namespace

TEST_CASE("beta2 from dispersion") {
  // Hand evaluation of -D*lambda^2/(2*pi*c) at the fiber defaults.
  const double beta2 = beta2_from_dispersion(16.75, 1550.0);
  CHECK(beta2 == doctest::Approx(-2.13638554e-26).epsilon(1e-6));
  CHECK(beta2_from_dispersion(0.0, 1550.0) == 0.0);
  CHECK(beta2_from_dispersion(-5.0, 1550.0) > 0.0);
  CHECK(beta2_from_dispersion(5.0, 1550.0) < 0.0);
}

TEST_CASE("dispersion step is all-pass and identity at dz=0") {
  const ComplexSignal sig = random_waveform(1024, 1.2e11, 3);
  const double beta2 = beta2_from_dispersion(16.75, 1550.0);
  const ComplexSignal out = dispersion_step(sig, beta2, 1000.0);

  const ArrayXd mag_in = fft(sig.samples).abs();
  const ArrayXd mag_out = fft(out.samples).abs();
  CHECK((mag_in - mag_out).abs().maxCoeff() / mag_in.maxCoeff() < 1e-12);

  const ComplexSignal same = dispersion_step(sig, beta2, 0.0);
  CHECK(testing::relative_l2_error(same.samples, sig.samples) < 1e-12);
}

TEST_CASE("gaussian pulse broadens by the analytic dispersion factor") {
  const double t0 = 20e-12;
  const double dt = 1e-12;
  const double beta2 = beta2_from_dispersion(16.75, 1550.0);
  const double z = 25e3;
  const ComplexSignal pulse = gaussian_pulse(1024, dt, t0, 1.0);
  const ComplexSignal out = dispersion_step(pulse, beta2, z);

  const double expected_t1 = t0 * std::sqrt(1.0 + std::pow(beta2 * z / (t0 * t0), 2));
  const double measured_t1 = std::numbers::sqrt2 * testing::rms_width(out.samples, dt);
  CHECK(std::abs(measured_t1 - expected_t1) / expected_t1 < 0.005);
}

TEST_CASE("nonlinear step: constant envelope phase shift") {
  // gamma*P*dz = 1.3e-3 * 0.01 * 1000 m = 0.013 rad
  ArrayXcd a = ArrayXcd::Constant(64, Complex(std::sqrt(0.01), 0.0));
  const ComplexSignal out = nonlinear_step({a, 1.0}, 1.3e-3, 1000.0, 0.0);
  for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
    CHECK(std::abs(std::arg(out.samples[i]) - 0.013) < 1e-12);
    CHECK(std::abs(std::abs(out.samples[i]) - std::sqrt(0.01)) < 1e-15);
  }
}

TEST_CASE("nonlinear step: gamma=0 scales magnitude by the attenuation only") {
  const ComplexSignal sig = random_waveform(128, 1.0, 5);
  const ComplexSignal same = nonlinear_step(sig, 0.0, 500.0, 0.0);
  CHECK((same.samples - sig.samples).abs().maxCoeff() == 0.0);

  const double alpha = alpha_power_per_m_from_db_km(0.2);
  const ComplexSignal damped = nonlinear_step(sig, 0.0, 1000.0, alpha);
  const double expected = std::exp(-0.5 * alpha * 1000.0);
  for (Eigen::Index i = 0; i < sig.samples.size(); ++i)
    CHECK(std::abs(damped.samples[i]) ==
          doctest::Approx(std::abs(sig.samples[i]) * expected).epsilon(1e-12));
}

TEST_CASE("step sizes: 80 km at 0.01 km is 8000 full steps") {
  FiberParams params;
  params.length_km = 80.0;
  params.step_km = 0.01;
  const auto sizes = ssfm_step_sizes_m(params);
  CHECK(sizes.size() == 8000);
  CHECK(sizes.front() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sizes.back() == doctest::Approx(10.0).epsilon(1e-9));

  params.length_km = 0.025;
  params.step_km = 0.01;
  const auto tail = ssfm_step_sizes_m(params);
  REQUIRE(tail.size() == 3);
  CHECK(tail[2] == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("linear-only propagation preserves the spectrum magnitude") {
  FiberParams params;
  params.length_km = 30.0;
  params.step_km = 0.5;
  params.gamma_per_w_km = 0.0;
  params.alpha_db_km = 0.0;
  const ComplexSignal sig = random_waveform(2048, 1.2e11, 7);
  const ComplexSignal out = propagate_ssfm(sig, params, kNoNoise);
  const ArrayXd mag_in = fft(sig.samples).abs();
  const ArrayXd mag_out = fft(out.samples).abs();
  CHECK((mag_in - mag_out).abs().maxCoeff() / mag_in.maxCoeff() < 1e-12);
}

TEST_CASE("dispersionless propagation is the exact SPM solution") {
  FiberParams params;
  params.length_km = 12.0;
  params.step_km = 0.05;
  params.dispersion_ps_nm_km = 0.0;
  params.alpha_db_km = 0.0;
  const ComplexSignal sig = random_waveform(512, 1.2e11, 9);
  const ComplexSignal out = propagate_ssfm(sig, params, kNoNoise);
  const double gl = params.gamma_per_w_m() * params.length_m();
  for (Eigen::Index i = 0; i < sig.samples.size(); ++i) {
    const Complex expected =
        sig.samples[i] * std::polar(1.0, gl * std::norm(sig.samples[i]));
    CHECK(std::abs(out.samples[i] - expected) <= 1e-9 * std::abs(expected) + 1e-15);
    CHECK(std::abs(std::abs(out.samples[i]) - std::abs(sig.samples[i])) < 1e-12);
  }
}

TEST_CASE("energy is conserved without attenuation") {
  FiberParams params;
  params.length_km = 20.0;
  params.step_km = 0.1;
  params.alpha_db_km = 0.0;
  const ComplexSignal sig = random_waveform(2048, 1.2e11, 11);
  const ComplexSignal out = propagate_ssfm(sig, params, kNoNoise);
  CHECK(std::abs(total_energy(out) - total_energy(sig)) / total_energy(sig) < 1e-10);
}

TEST_CASE("strang splitting shows second-order step convergence") {
  // Two overlapping Gaussian pulses, strong nonlinearity; halving the step
  // should cut the error against a dz/8 reference about fourfold.
  const double dt = 2e-12;
  ComplexSignal sig = gaussian_pulse(1024, dt, 25e-12, 0.18);
  const ComplexSignal shifted = gaussian_pulse(1024, dt, 18e-12, 0.15);
  sig.samples += shifted.samples * Complex(0.0, 1.0) *
                 (ArrayXd::LinSpaced(1024, 0.0, 40.0)).cos().cast<Complex>();

  FiberParams params;
  params.length_km = 40.0;
  params.alpha_db_km = 0.0;
  params.gamma_per_w_km = 2.0;

  params.step_km = 0.05;
  const ArrayXcd reference = propagate_ssfm(sig, params, kNoNoise).samples;
  params.step_km = 0.4;
  const double err_coarse =
      testing::relative_l2_error(propagate_ssfm(sig, params, kNoNoise).samples, reference);
  params.step_km = 0.2;
  const double err_fine =
      testing::relative_l2_error(propagate_ssfm(sig, params, kNoNoise).samples, reference);
  CHECK(err_coarse / err_fine > 3.5);
  CHECK(err_coarse / err_fine < 4.8);
}

TEST_CASE("awgn hits the requested SNR and is seed-deterministic") {
  const Eigen::Index n = 1 << 18;
  const ComplexSignal sig = random_waveform(n, 1.0, 13);
  const double snr_db = 20.0;
  const ComplexSignal noisy = add_awgn(sig, snr_db, 99);

  const double noise_power = (noisy.samples - sig.samples).abs2().sum() / n;
  const double measured_snr = 10.0 * std::log10(mean_power_w(sig) / noise_power);
  CHECK(std::abs(measured_snr - snr_db) < 0.1);

  const ComplexSignal again = add_awgn(sig, snr_db, 99);
  CHECK((again.samples - noisy.samples).abs().maxCoeff() == 0.0);
  const ComplexSignal other = add_awgn(sig, snr_db, 100);
  CHECK((other.samples - noisy.samples).abs().maxCoeff() > 0.0);

  const ComplexSignal clean = add_awgn(sig, std::numeric_limits<double>::infinity(), 1);
  CHECK((clean.samples - sig.samples).abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(add_awgn({ArrayXcd::Zero(16), 1.0}, 20.0, 1), DegenerateInputError);
}

TEST_CASE("propagation noise placement matches add_awgn on the clean output") {
  FiberParams params;
  params.length_km = 5.0;
  params.step_km = 0.1;
  const ComplexSignal sig = random_waveform(1024, 1.2e11, 17);
  const ComplexSignal clean = propagate_ssfm(sig, params, kNoNoise);
  NoiseConfig noise;
  noise.enabled = true;
  noise.snr_db = 24.0;
  noise.seed = 4242;
  const ComplexSignal noisy = propagate_ssfm(sig, params, noise);
  const ComplexSignal expected = add_awgn(clean, noise.snr_db, noise.seed);
  CHECK((noisy.samples - expected.samples).abs().maxCoeff() == 0.0);
}

TEST_CASE("invalid configurations are rejected") {
  FiberParams params;
  params.step_km = 0.0;
  CHECK_THROWS_AS(validate(params), ConfigError);
  params.step_km = 2.0;
  params.length_km = 1.0;
  CHECK_THROWS_AS(validate(params), ConfigError);
  params = FiberParams{};
  params.gamma_per_w_km = -1.0;
  CHECK_THROWS_AS(validate(params), ConfigError);

  const ComplexSignal bad = random_waveform(100, 1.0, 1);
  CHECK_THROWS_AS(propagate_ssfm(bad, FiberParams{}, kNoNoise), ShapeError);
}

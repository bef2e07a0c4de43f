// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fibergan/errors.hpp"
#include "fibergan/fft.hpp"
#include "fibergan/rng.hpp"

using namespace fibergan;

namespace {
ArrayXcd random_signal(Eigen::Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ArrayXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = Complex(rng.gaussian(), rng.gaussian());
  return x;
}
}  // namespace

TEST_CASE("fft/ifft round trip at length 4096") {
  const ArrayXcd x = random_signal(4096, 7);
  const ArrayXcd back = ifft(fft(x));
  CHECK(std::sqrt((back - x).abs2().sum() / x.abs2().sum()) < 1e-12);
}

TEST_CASE("Parseval with the 1/N on the inverse") {
  const ArrayXcd x = random_signal(1024, 11);
  const ArrayXcd spectrum = fft(x);
  const double time_energy = x.abs2().sum();
  const double freq_energy = spectrum.abs2().sum() / static_cast<double>(x.size());
  CHECK(std::abs(time_energy - freq_energy) / time_energy < 1e-12);
}

TEST_CASE("impulse transforms to an all-ones spectrum") {
  ArrayXcd x = ArrayXcd::Zero(64);
  x[0] = Complex(1.0, 0.0);
  const ArrayXcd spectrum = fft(x);
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    CHECK(std::abs(spectrum[k].real() - 1.0) < 1e-14);
    CHECK(std::abs(spectrum[k].imag()) < 1e-14);
  }
}

TEST_CASE("single-bin tone lands in the right bin") {
  const Eigen::Index n = 256;
  ArrayXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = 2.0 * std::numbers::pi * 3.0 * static_cast<double>(i) / n;
    x[i] = Complex(std::cos(phi), std::sin(phi));
  }
  const ArrayXcd spectrum = fft(x);
  CHECK(std::abs(spectrum[3] - Complex(static_cast<double>(n), 0.0)) < 1e-9);
  double rest = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (k != 3) rest = std::max(rest, std::abs(spectrum[k]));
  CHECK(rest < 1e-9);
}

TEST_CASE("non-power-of-two lengths are rejected") {
  CHECK_THROWS_AS(fft(random_signal(100, 3)), ShapeError);
  CHECK_THROWS_AS(FftPlan(12), ShapeError);
}

TEST_CASE("fft omega axis layout") {
  const ArrayXd omega = fft_omega(8, 8.0);
  CHECK(omega[0] == 0.0);
  CHECK(omega[1] == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(omega[7] == doctest::Approx(-2.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(omega[4] == doctest::Approx(-8.0 * std::numbers::pi).epsilon(1e-14));
}

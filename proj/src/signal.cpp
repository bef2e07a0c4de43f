// SPDX-License-Identifier: Apache-2.0
#include "fibergan/signal.hpp"

#include <cmath>

#include "fibergan/errors.hpp"

namespace fibergan {

void validate(const ComplexSignal& signal) {
  if (signal.samples.size() == 0) throw ShapeError("signal is empty");
  if (!(signal.sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
  for (Eigen::Index i = 0; i < signal.samples.size(); ++i) {
    const Complex& c = signal.samples[i];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ShapeError("signal contains non-finite samples");
  }
}

double mean_power_w(const ComplexSignal& signal) {
  if (signal.samples.size() == 0) return 0.0;
  return signal.samples.abs2().sum() / static_cast<double>(signal.samples.size());
}

double total_energy(const ComplexSignal& signal) { return signal.samples.abs2().sum(); }

}  // namespace fibergan

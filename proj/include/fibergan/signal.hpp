// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_SIGNAL_HPP
#define FIBERGAN_SIGNAL_HPP

#include <Eigen/Core>
#include <complex>

namespace fibergan {

using Complex = std::complex<double>;
using ArrayXcd = Eigen::ArrayXcd;
using ArrayXd = Eigen::ArrayXd;

// Uniformly sampled complex baseband waveform in sqrt-watt units.
struct ComplexSignal {
  ArrayXcd samples;
  double sample_rate_hz = 0.0;

  ComplexSignal() = default;
  ComplexSignal(ArrayXcd s, double rate) : samples(std::move(s)), sample_rate_hz(rate) {}

  Eigen::Index size() const { return samples.size(); }
};

// Throws if the signal is empty, has a non-positive rate, or contains
// non-finite components.
void validate(const ComplexSignal& signal);

// Mean of |x|^2 in watts.
double mean_power_w(const ComplexSignal& signal);

// Sum of |x|^2.
double total_energy(const ComplexSignal& signal);

}  // namespace fibergan

#endif

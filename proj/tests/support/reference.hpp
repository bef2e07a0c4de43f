// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, kept independent of the code paths
// they check.
#ifndef FIBERGAN_TESTS_REFERENCE_HPP
#define FIBERGAN_TESTS_REFERENCE_HPP

#include <complex>
#include <vector>

#include "fibergan/fft.hpp"
#include "fibergan/signal.hpp"

namespace fibergan::testing {

// Full linear convolution via zero-padded FFTs, then "same" slicing with the
// group delay removed; the direct-sum fir_filter must agree.
inline ArrayXcd fft_convolve_same(const ArrayXcd& x, const ArrayXd& taps) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = taps.size();
  Eigen::Index size = 1;
  while (size < n + m - 1) size <<= 1;
  ArrayXcd a = ArrayXcd::Zero(size);
  a.head(n) = x;
  ArrayXcd b = ArrayXcd::Zero(size);
  for (Eigen::Index i = 0; i < m; ++i) b[i] = Complex(taps[i], 0.0);
  const ArrayXcd full = ifft(fft(a) * fft(b));
  return full.segment((m - 1) / 2, n);
}

// Plain direct-sum full convolution of two real tap vectors.
inline ArrayXd convolve_full(const ArrayXd& a, const ArrayXd& b) {
  ArrayXd out = ArrayXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// RMS width of |A|^2 around its centroid, on a centered uniform time grid.
inline double rms_width(const ArrayXcd& samples, double dt) {
  const Eigen::Index n = samples.size();
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(n) / 2.0) * dt;
    const double p = std::norm(samples[i]);
    w0 += p;
    w1 += t * p;
    w2 += t * t * p;
  }
  const double mean = w1 / w0;
  return std::sqrt(w2 / w0 - mean * mean);
}

inline double relative_l2_error(const ArrayXcd& got, const ArrayXcd& want) {
  return std::sqrt((got - want).abs2().sum() / want.abs2().sum());
}

}  // namespace fibergan::testing

#endif

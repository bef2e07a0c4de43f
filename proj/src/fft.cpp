// SPDX-License-Identifier: Apache-2.0
#include "fibergan/fft.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "fibergan/errors.hpp"

namespace fibergan {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(Eigen::Index n) : n_(n) {
  if (!is_power_of_two(n)) throw ShapeError("fft length must be a power of two");
  bitrev_.resize(static_cast<std::size_t>(n));
  int log2n = 0;
  while ((Eigen::Index{1} << log2n) < n) ++log2n;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index r = 0;
    for (int b = 0; b < log2n; ++b)
      if (i & (Eigen::Index{1} << b)) r |= Eigen::Index{1} << (log2n - 1 - b);
    bitrev_[static_cast<std::size_t>(i)] = r;
  }
  twiddles_.resize(std::max<Eigen::Index>(n / 2, 1));
  for (Eigen::Index k = 0; k < twiddles_.size(); ++k) {
    double phi = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = Complex(std::cos(phi), std::sin(phi));
  }
}

void FftPlan::transform(ArrayXcd& data, bool inverse) const {
  if (data.size() != n_) throw ShapeError("fft plan/data length mismatch");
  for (Eigen::Index i = 0; i < n_; ++i) {
    Eigen::Index j = bitrev_[static_cast<std::size_t>(i)];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (Eigen::Index len = 2; len <= n_; len <<= 1) {
    const Eigen::Index half = len >> 1;
    const Eigen::Index stride = n_ / len;
    for (Eigen::Index start = 0; start < n_; start += len) {
      for (Eigen::Index k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        Complex& a = data[start + k];
        Complex& b = data[start + k + half];
        const Complex t = b * w;
        b = a - t;
        a += t;
      }
    }
  }
  if (inverse) data *= 1.0 / static_cast<double>(n_);
}

void FftPlan::forward_inplace(ArrayXcd& data) const { transform(data, false); }
void FftPlan::inverse_inplace(ArrayXcd& data) const { transform(data, true); }

namespace {
const FftPlan& cached_plan(Eigen::Index n) {
  thread_local std::unordered_map<Eigen::Index, FftPlan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, FftPlan(n)).first;
  return it->second;
}
}  // namespace

ArrayXcd fft(const ArrayXcd& x) {
  ArrayXcd y = x;
  cached_plan(x.size()).forward_inplace(y);
  return y;
}

ArrayXcd ifft(const ArrayXcd& x) {
  ArrayXcd y = x;
  cached_plan(x.size()).inverse_inplace(y);
  return y;
}

ArrayXd fft_omega(Eigen::Index n, double sample_rate_hz) {
  ArrayXd omega(n);
  const double df = sample_rate_hz / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double f = (k < (n + 1) / 2) ? static_cast<double>(k) * df
                                       : static_cast<double>(k - n) * df;
    omega[k] = 2.0 * std::numbers::pi * f;
  }
  return omega;
}

}  // namespace fibergan

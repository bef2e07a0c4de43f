// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_FFT_HPP
#define FIBERGAN_FFT_HPP

#include "fibergan/signal.hpp"

namespace fibergan {

// Radix-2 Cooley-Tukey plan with precomputed twiddles for one length.
// Scaling convention: fft() is unscaled, ifft() carries the full 1/N, so
// ifft(fft(x)) == x and sum|x|^2 == (1/N) sum|X|^2 (Parseval).
// Plans are cheap to build and confined per worker thread when cached.
class FftPlan {
 public:
  explicit FftPlan(Eigen::Index n);  // n must be a power of two >= 1

  Eigen::Index size() const { return n_; }

  void forward_inplace(ArrayXcd& data) const;
  void inverse_inplace(ArrayXcd& data) const;

 private:
  void transform(ArrayXcd& data, bool inverse) const;

  Eigen::Index n_;
  std::vector<Eigen::Index> bitrev_;
  ArrayXcd twiddles_;  // e^{-2*pi*i*k/n} for k in [0, n/2)
};

bool is_power_of_two(Eigen::Index n);

// One-shot transforms through a per-thread plan cache.
ArrayXcd fft(const ArrayXcd& x);
ArrayXcd ifft(const ArrayXcd& x);

// Angular-frequency axis in fft bin order: omega_k = 2*pi*f_k with
// f_k = k*fs/n for k < n/2 and (k-n)*fs/n above.
ArrayXd fft_omega(Eigen::Index n, double sample_rate_hz);

}  // namespace fibergan

#endif

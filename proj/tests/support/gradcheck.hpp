// SPDX-License-Identifier: Apache-2.0
//
// Central-finite-difference gradient oracle. Evaluates the true perturbed
// network, exploiting that a single-entry weight change shifts exactly one
// pre-activation, so the re-forward can start at the touched layer with a
// rank-1 update instead of a full pass. Mathematically this is the exact
// perturbed forward; only float-op associativity differs.
#ifndef FIBERGAN_TESTS_GRADCHECK_HPP
#define FIBERGAN_TESTS_GRADCHECK_HPP

#include <cmath>

#include "fibergan/nn.hpp"

namespace fibergan::testing {

struct GradCheckReport {
  std::size_t checked = 0;
  std::size_t skipped_near_kink = 0;
  double max_rel_error = 0.0;
  bool passed = true;
};

namespace detail {

// Forward from layer `start` given that layer's pre-activation.
inline double finish_forward(const MlpParams& params, const MlpSpec& spec, int start,
                             Eigen::VectorXd z, const Eigen::VectorXd& loss_weights,
                             bool* near_kink) {
  auto activate = [&](Eigen::VectorXd& v, Activation act) {
    switch (act) {
      case Activation::leaky_relu:
        if (near_kink && v.array().abs().minCoeff() < 1e-9) *near_kink = true;
        v = v.array().max(spec.leaky_slope * v.array()).matrix();
        break;
      case Activation::tanh:
        v = v.array().tanh().matrix();
        break;
      case Activation::sigmoid:
        v = (1.0 / (1.0 + (-v.array()).exp())).matrix();
        break;
      case Activation::identity:
        break;
    }
  };
  activate(z, spec.activations[start]);
  for (int l = start + 1; l < spec.layer_count(); ++l) {
    z = params.weights[l] * z + params.biases[l];
    activate(z, spec.activations[l]);
  }
  return loss_weights.dot(z);
}

}  // namespace detail

// Checks every weight and bias of `params` against central differences of
// the scalar loss w^T mlp(input). Entries whose perturbation straddles a
// leaky-ReLU kink are skipped (the two-sided difference is meaningless
// there); everything else must agree within rel_tol, with an absolute floor
// for gradients at the finite-difference noise level.
inline GradCheckReport finite_difference_check(const MlpParams& params, const MlpSpec& spec,
                                               const Eigen::VectorXd& input,
                                               const Eigen::VectorXd& loss_weights,
                                               double rel_tol = 1e-5, double abs_floor = 1e-8) {
  ForwardCache cache;
  forward(params, spec, input, &cache);
  const MlpGrads analytic =
      backward(params, spec, cache, loss_weights);  // d(w^T y)/d theta

  GradCheckReport report;
  auto compare = [&](double fd, double an) {
    const double err = std::abs(fd - an);
    const double rel = err / std::max({std::abs(fd), std::abs(an), 1e-300});
    if (err > abs_floor && rel > rel_tol) report.passed = false;
    if (err > abs_floor) report.max_rel_error = std::max(report.max_rel_error, rel);
    ++report.checked;
  };

  for (int l = 0; l < spec.layer_count(); ++l) {
    const Eigen::VectorXd z_base = cache.pre[static_cast<std::size_t>(l)].col(0);
    const Eigen::VectorXd a_prev = cache.act[static_cast<std::size_t>(l)].col(0);
    const int rows = spec.layer_widths[l + 1];
    const int cols = spec.layer_widths[l];

    auto eval_perturbed = [&](int row, double dz, bool* kink) {
      Eigen::VectorXd z = z_base;
      z[row] += dz;
      if (spec.activations[l] == Activation::leaky_relu &&
          (std::abs(z[row]) < 10.0 * std::abs(dz) || std::abs(z_base[row]) < 10.0 * std::abs(dz)))
        *kink = true;
      return detail::finish_forward(params, spec, l, std::move(z), loss_weights, kink);
    };

    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double theta = params.weights[static_cast<std::size_t>(l)](r, c);
        const double h = 1e-6 * std::max(1.0, std::abs(theta));
        const double dz = h * a_prev[c];
        if (dz == 0.0) {  // zero input activation: gradient is exactly zero
          compare(0.0, analytic.weights[static_cast<std::size_t>(l)](r, c));
          continue;
        }
        bool kink = false;
        const double up = eval_perturbed(r, dz, &kink);
        const double down = eval_perturbed(r, -dz, &kink);
        if (kink) {
          ++report.skipped_near_kink;
          continue;
        }
        compare((up - down) / (2.0 * h), analytic.weights[static_cast<std::size_t>(l)](r, c));
      }
      const double h = 1e-6;
      bool kink = false;
      const double up = eval_perturbed(r, h, &kink);
      const double down = eval_perturbed(r, -h, &kink);
      if (kink) {
        ++report.skipped_near_kink;
        continue;
      }
      compare((up - down) / (2.0 * h), analytic.biases[static_cast<std::size_t>(l)][r]);
    }
  }
  return report;
}

}  // namespace fibergan::testing

#endif

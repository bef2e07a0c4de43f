// SPDX-License-Identifier: Apache-2.0
#include "fibergan/nn.hpp"

#include <cmath>

#include "fibergan/binio.hpp"
#include "fibergan/errors.hpp"
#include "fibergan/rng.hpp"

namespace fibergan {

void validate(const MlpSpec& spec) {
  if (spec.layer_widths.size() < 2) throw ConfigError("mlp needs at least two layer widths");
  for (int w : spec.layer_widths)
    if (w < 1) throw ConfigError("layer widths must be >= 1");
  if (spec.activations.size() != spec.layer_widths.size() - 1)
    throw ConfigError("activation count must equal layer count");
}

void validate_against(const MlpParams& params, const MlpSpec& spec) {
  validate(spec);
  const auto layers = static_cast<std::size_t>(spec.layer_count());
  if (params.weights.size() != layers || params.biases.size() != layers)
    throw ShapeError("parameter layer count mismatch");
  for (std::size_t l = 0; l < layers; ++l) {
    if (params.weights[l].rows() != spec.layer_widths[l + 1] ||
        params.weights[l].cols() != spec.layer_widths[l] ||
        params.biases[l].size() != spec.layer_widths[l + 1])
      throw ShapeError("parameter shape mismatch at layer " + std::to_string(l));
    if (!params.weights[l].allFinite() || !params.biases[l].allFinite())
      throw ShapeError("non-finite parameters at layer " + std::to_string(l));
  }
}

MlpParams init_params(const MlpSpec& spec, std::uint64_t seed) {
  validate(spec);
  SplitMix64 rng(seed);
  MlpParams params;
  for (int l = 0; l < spec.layer_count(); ++l) {
    const int fan_in = spec.layer_widths[l];
    const int fan_out = spec.layer_widths[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-limit, limit);
    params.weights.push_back(std::move(w));
    params.biases.push_back(VectorXd::Zero(fan_out));
  }
  return params;
}

namespace {
void apply_activation(MatrixXd& x, Activation act, double leaky_slope) {
  switch (act) {
    case Activation::leaky_relu:
      x = x.array().max(leaky_slope * x.array()).matrix();
      break;
    case Activation::tanh:
      x = x.array().tanh().matrix();
      break;
    case Activation::sigmoid:
      x = (1.0 / (1.0 + (-x.array()).exp())).matrix();
      break;
    case Activation::identity:
      break;
  }
}

// Derivative written in terms of pre-activation z and activation output a.
MatrixXd activation_grad(const MatrixXd& z, const MatrixXd& a, Activation act,
                         double leaky_slope) {
  switch (act) {
    case Activation::leaky_relu:
      return (z.array() > 0.0).select(MatrixXd::Ones(z.rows(), z.cols()),
                                      MatrixXd::Constant(z.rows(), z.cols(), leaky_slope));
    case Activation::tanh:
      return (1.0 - a.array().square()).matrix();
    case Activation::sigmoid:
      return (a.array() * (1.0 - a.array())).matrix();
    case Activation::identity:
      return MatrixXd::Ones(z.rows(), z.cols());
  }
  return MatrixXd::Ones(z.rows(), z.cols());
}
}  // namespace

MatrixXd forward(const MlpParams& params, const MlpSpec& spec,
                 const Eigen::Ref<const MatrixXd>& input, ForwardCache* cache) {
  if (input.rows() != spec.input_width())
    throw ShapeError("input width " + std::to_string(input.rows()) + " does not match spec " +
                     std::to_string(spec.input_width()));
  if (cache) {
    cache->pre.clear();
    cache->act.clear();
    cache->act.push_back(input);
  }
  MatrixXd x = input;
  for (int l = 0; l < spec.layer_count(); ++l) {
    MatrixXd z = params.weights[l] * x;
    z.colwise() += params.biases[l];
    if (cache) cache->pre.push_back(z);
    apply_activation(z, spec.activations[l], spec.leaky_slope);
    if (cache) cache->act.push_back(z);
    x = std::move(z);
  }
  return x;
}

MlpGrads zero_grads(const MlpSpec& spec) {
  MlpGrads grads;
  for (int l = 0; l < spec.layer_count(); ++l) {
    grads.weights.emplace_back(MatrixXd::Zero(spec.layer_widths[l + 1], spec.layer_widths[l]));
    grads.biases.emplace_back(VectorXd::Zero(spec.layer_widths[l + 1]));
  }
  return grads;
}

void accumulate(MlpGrads& into, const MlpGrads& from) {
  for (std::size_t l = 0; l < into.weights.size(); ++l) {
    into.weights[l] += from.weights[l];
    into.biases[l] += from.biases[l];
  }
}

MlpGrads backward(const MlpParams& params, const MlpSpec& spec, const ForwardCache& cache,
                  const Eigen::Ref<const MatrixXd>& output_grad, MatrixXd* input_grad,
                  bool want_param_grads) {
  const int layers = spec.layer_count();
  if (cache.pre.size() != static_cast<std::size_t>(layers) ||
      cache.act.size() != static_cast<std::size_t>(layers) + 1)
    throw ShapeError("forward cache does not match spec");
  if (output_grad.rows() != spec.output_width() || output_grad.cols() != cache.act[0].cols())
    throw ShapeError("output gradient shape mismatch");

  MlpGrads grads;
  if (want_param_grads) grads = zero_grads(spec);

  MatrixXd delta = output_grad;
  for (int l = layers - 1; l >= 0; --l) {
    delta = delta.cwiseProduct(
        activation_grad(cache.pre[l], cache.act[l + 1], spec.activations[l], spec.leaky_slope));
    if (want_param_grads) {
      grads.weights[l].noalias() = delta * cache.act[l].transpose();
      grads.biases[l].noalias() = delta.rowwise().sum();
    }
    if (l > 0 || input_grad) {
      MatrixXd next = params.weights[l].transpose() * delta;
      if (l == 0 && input_grad) *input_grad = std::move(next);
      else delta = std::move(next);
    }
  }
  return grads;
}

std::pair<double, Eigen::ArrayXXd> bce_loss(const Eigen::ArrayXXd& pred,
                                            const Eigen::ArrayXXd& label) {
  if (pred.rows() != label.rows() || pred.cols() != label.cols())
    throw ShapeError("bce shapes differ");
  constexpr double kClamp = 1e-12;
  const auto n = static_cast<double>(pred.size());
  const Eigen::ArrayXXd p = pred.min(1.0 - kClamp).max(kClamp);
  const double loss = (-(label * p.log() + (1.0 - label) * (1.0 - p).log())).sum() / n;
  if (!std::isfinite(loss)) throw std::range_error("bce loss is not finite");
  Eigen::ArrayXXd grad = (-(label / p) + (1.0 - label) / (1.0 - p)) / n;
  return {loss, std::move(grad)};
}

std::pair<double, Eigen::ArrayXXd> mse_loss(const Eigen::ArrayXXd& pred,
                                            const Eigen::ArrayXXd& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw ShapeError("mse shapes differ");
  const auto n = static_cast<double>(pred.size());
  const Eigen::ArrayXXd diff = pred - target;
  const double loss = diff.square().sum() / n;
  Eigen::ArrayXXd grad = 2.0 * diff / n;
  return {loss, std::move(grad)};
}

AdamState make_adam_state(const MlpSpec& spec, double lr, double beta1, double beta2,
                          double epsilon) {
  AdamState state;
  state.lr = lr;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.epsilon = epsilon;
  for (int l = 0; l < spec.layer_count(); ++l) {
    state.m_weights.emplace_back(MatrixXd::Zero(spec.layer_widths[l + 1], spec.layer_widths[l]));
    state.v_weights.emplace_back(MatrixXd::Zero(spec.layer_widths[l + 1], spec.layer_widths[l]));
    state.m_biases.emplace_back(VectorXd::Zero(spec.layer_widths[l + 1]));
    state.v_biases.emplace_back(VectorXd::Zero(spec.layer_widths[l + 1]));
  }
  return state;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
  if (grads.weights.size() != params.weights.size())
    throw ShapeError("gradient layer count mismatch");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    auto update = [&](auto& theta, const auto& g, auto& m, auto& v) {
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = (state.beta2 * v.array() + (1.0 - state.beta2) * g.array().square()).matrix();
      theta.array() -=
          state.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
    };
    update(params.weights[l], grads.weights[l], state.m_weights[l], state.v_weights[l]);
    update(params.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l]);
  }
}

void write_mlp(std::ostream& out, const MlpParams& params, const MlpSpec& spec) {
  validate_against(params, spec);
  write_pod(out, static_cast<std::uint32_t>(spec.layer_count()));
  for (int l = 0; l < spec.layer_count(); ++l) {
    write_pod(out, static_cast<std::uint32_t>(spec.layer_widths[l]));
    write_pod(out, static_cast<std::uint32_t>(spec.layer_widths[l + 1]));
    write_pod(out, static_cast<std::uint8_t>(spec.activations[l]));
  }
  for (int l = 0; l < spec.layer_count(); ++l) {
    const MatrixXd& w = params.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) write_pod(out, w(r, c));
    for (Eigen::Index r = 0; r < params.biases[l].size(); ++r)
      write_pod(out, params.biases[l][r]);
  }
  if (!out) throw IoError("model write failed");
}

void read_mlp(std::istream& in, MlpParams& params, MlpSpec& spec) {
  std::uint32_t layers = 0;
  read_pod(in, layers);
  if (layers > 64) throw IoError("implausible layer count in model data");
  spec = MlpSpec{};
  params = MlpParams{};
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dims;
  for (std::uint32_t l = 0; l < layers; ++l) {
    std::uint32_t in_w = 0, out_w = 0;
    std::uint8_t act = 0;
    read_pod(in, in_w);
    read_pod(in, out_w);
    read_pod(in, act);
    if (act > static_cast<std::uint8_t>(Activation::identity))
      throw IoError("unknown activation tag in model data");
    if (l == 0) spec.layer_widths.push_back(static_cast<int>(in_w));
    spec.layer_widths.push_back(static_cast<int>(out_w));
    spec.activations.push_back(static_cast<Activation>(act));
    dims.emplace_back(in_w, out_w);
  }
  for (std::uint32_t l = 0; l < layers; ++l) {
    MatrixXd w(dims[l].second, dims[l].first);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) read_pod(in, w(r, c));
    VectorXd b(dims[l].second);
    for (Eigen::Index r = 0; r < b.size(); ++r) read_pod(in, b[r]);
    params.weights.push_back(std::move(w));
    params.biases.push_back(std::move(b));
  }
  if (layers > 0) validate_against(params, spec);
}

}  // namespace fibergan

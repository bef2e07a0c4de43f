// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_NN_HPP
#define FIBERGAN_NN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fibergan {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Tag values double as the on-disk activation encoding.
enum class Activation : std::uint8_t { leaky_relu = 0, tanh = 1, sigmoid = 2, identity = 3 };

struct MlpSpec {
  std::vector<int> layer_widths;        // input, hidden..., output
  std::vector<Activation> activations;  // one per affine layer
  double leaky_slope = 0.2;

  int layer_count() const { return static_cast<int>(activations.size()); }
  int input_width() const { return layer_widths.front(); }
  int output_width() const { return layer_widths.back(); }
};

void validate(const MlpSpec& spec);

struct MlpParams {
  std::vector<MatrixXd> weights;  // out x in per layer
  std::vector<VectorXd> biases;
};

void validate_against(const MlpParams& params, const MlpSpec& spec);

// Glorot-uniform weights, zero biases; bit-reproducible from the seed.
MlpParams init_params(const MlpSpec& spec, std::uint64_t seed);

// Pre-activations and layer outputs kept for the backward pass. act[0] is
// the input; act[l+1] = activation(pre[l]).
struct ForwardCache {
  std::vector<MatrixXd> pre;
  std::vector<MatrixXd> act;
};

// Columns are batch items. The cache is optional for inference-only calls.
MatrixXd forward(const MlpParams& params, const MlpSpec& spec,
                 const Eigen::Ref<const MatrixXd>& input, ForwardCache* cache = nullptr);

struct MlpGrads {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
};

MlpGrads zero_grads(const MlpSpec& spec);
void accumulate(MlpGrads& into, const MlpGrads& from);

// Exact reverse-mode gradients for the forward pass that filled the cache.
// output_grad has the output shape; input_grad (if requested) receives
// dLoss/dInput so discriminator gradients can reach the generator. Set
// want_param_grads = false to skip the weight/bias products when only the
// input gradient is needed.
MlpGrads backward(const MlpParams& params, const MlpSpec& spec, const ForwardCache& cache,
                  const Eigen::Ref<const MatrixXd>& output_grad, MatrixXd* input_grad = nullptr,
                  bool want_param_grads = true);

// Mean binary cross-entropy over the entries with logs clamped at 1e-12;
// grad is the gradient of the returned mean.
std::pair<double, Eigen::ArrayXXd> bce_loss(const Eigen::ArrayXXd& pred,
                                            const Eigen::ArrayXXd& label);

// Mean squared error over all entries; grad = 2*(pred-target)/count.
std::pair<double, Eigen::ArrayXXd> mse_loss(const Eigen::ArrayXXd& pred,
                                            const Eigen::ArrayXXd& target);

struct AdamState {
  std::vector<MatrixXd> m_weights, v_weights;
  std::vector<VectorXd> m_biases, v_biases;
  std::int64_t step = 0;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const MlpSpec& spec, double lr = 2e-4, double beta1 = 0.5,
                          double beta2 = 0.999, double epsilon = 1e-8);

// Standard bias-corrected Adam update, in place.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

// Binary layout shared by every model file: layer count u32, per layer
// (in u32, out u32, activation u8), then per layer row-major f64 weights
// followed by f64 biases. Little-endian throughout.
void write_mlp(std::ostream& out, const MlpParams& params, const MlpSpec& spec);
void read_mlp(std::istream& in, MlpParams& params, MlpSpec& spec);

}  // namespace fibergan

#endif

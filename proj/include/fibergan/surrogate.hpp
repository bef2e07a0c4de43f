// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_SURROGATE_HPP
#define FIBERGAN_SURROGATE_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include "fibergan/nn.hpp"
#include "fibergan/signal.hpp"

namespace fibergan {

// Condition window: past/current/future transmitted symbols at sps
// samples each, real and imaginary parts interleaved per sample.
struct WindowGeometry {
  int past_symbols = 10;
  int future_symbols = 10;
  int sps = 4;
  int current_symbols = 1;

  int window_symbols() const { return past_symbols + current_symbols + future_symbols; }
  int condition_dim() const { return 2 * sps * window_symbols(); }
  int current_dim() const { return 2 * sps * current_symbols; }
};

void validate(const WindowGeometry& geometry);

// Single global affine map x -> (x - offset)/scale fitted so the training
// data lands in [-1, 1]; stored with the model and inverted at generation.
struct Scaler {
  double scale = 1.0;
  double offset = 0.0;

  double apply(double x) const { return (x - offset) / scale; }
  double invert(double y) const { return y * scale + offset; }
};

Scaler fit_scaler(const Eigen::Ref<const MatrixXd>& conditions,
                  const Eigen::Ref<const MatrixXd>& targets);

struct CganConfig {
  int noise_dim = 10;
  WindowGeometry geometry;
  int epochs = 2000;
  int batch_size = 64;
  double real_label_lo = 0.7, real_label_hi = 1.2;
  double fake_label_lo = 0.0, fake_label_hi = 0.3;
  int d_steps_per_g_step = 1;
  std::uint64_t seed = 1;
  double adam_lr = 2e-4;
  double adam_beta1 = 0.5;
  double leaky_slope = 0.2;
  int checkpoint_every_epochs = 0;  // 0 disables checkpoints
};

void validate(const CganConfig& config);

// Hidden widths 288,256,64 into the current-symbol output, leaky/tanh.
MlpSpec make_generator_spec(const WindowGeometry& geometry, int noise_dim, double leaky_slope);
// Hidden widths 256,256,64 into one probability, leaky/sigmoid.
MlpSpec make_discriminator_spec(const WindowGeometry& geometry, double leaky_slope);

// Generator + discriminator plus everything generation needs. FCNN models
// reuse the container with an empty discriminator.
struct CganModel {
  MlpSpec generator_spec;
  MlpParams generator;
  MlpSpec discriminator_spec;
  MlpParams discriminator;
  Scaler scaler;
  WindowGeometry geometry;
  int noise_dim = 10;

  bool is_fcnn() const { return discriminator_spec.activations.empty(); }
};

void validate(const CganModel& model);

// [past | current | future] transmitted samples around symbol_index,
// re/im interleaved; width condition_dim().
VectorXd build_condition(const ComplexSignal& tx_samples, Eigen::Index symbol_index,
                         const WindowGeometry& geometry);

// The received samples of the current symbol, re/im interleaved; width
// current_dim().
VectorXd build_target(const ComplexSignal& rx_samples, Eigen::Index symbol_index,
                      const WindowGeometry& geometry);

// Columns are window vectors for every symbol index in
// [edge_discard, n_symbols - edge_discard) that has a full window.
struct WindowDataset {
  MatrixXd conditions;  // condition_dim x n
  MatrixXd targets;     // current_dim x n
};

WindowDataset build_window_dataset(const ComplexSignal& tx, const ComplexSignal& rx,
                                   const WindowGeometry& geometry, int edge_discard_symbols);

struct EpochLoss {
  int epoch = 0;
  double d_loss = 0.0;  // mse for the FCNN trace
  double g_loss = 0.0;
};

using CheckpointFn = std::function<void(int epoch, const CganModel&)>;

// Adversarial training with uniform label smoothing; discriminator sees
// condition-first concatenations, generator noise-first. Deterministic
// given (data, config, seed); the loss trace is informative only, the
// objective is not expected to converge.
CganModel train_cgan(const Eigen::Ref<const MatrixXd>& conditions,
                     const Eigen::Ref<const MatrixXd>& targets, const CganConfig& config,
                     std::vector<EpochLoss>* trace = nullptr,
                     const CheckpointFn& checkpoint = nullptr);

// Deterministic baseline: the generator architecture (noise slots zeroed)
// trained on MSE. Returned as a CganModel with an empty discriminator.
CganModel train_fcnn(const Eigen::Ref<const MatrixXd>& conditions,
                     const Eigen::Ref<const MatrixXd>& targets, const CganConfig& config,
                     std::vector<EpochLoss>* trace = nullptr);

// One generator draw for a raw (unscaled) condition vector; returns the
// current-symbol samples in signal units. The noise seed is ignored for
// FCNN models, whose output is a pure function of the condition.
VectorXd surrogate_sample(const CganModel& model, const Eigen::Ref<const VectorXd>& condition,
                          std::uint64_t noise_seed);

// Slides over interior symbols and emits generated channel-output samples;
// the first past_symbols and last future_symbols symbols have no window and
// are zero-filled (callers exclude them from metrics). Per-symbol noise is
// counter-seeded, so results are independent of evaluation order.
ComplexSignal generate_channel_output(const CganModel& model, const ComplexSignal& tx_samples,
                                      std::uint64_t seed);

// "FGNN" container: both networks in order, then scaler, then geometry.
void save_model(const std::string& path, const CganModel& model);
CganModel load_model(const std::string& path);
void write_model(std::ostream& out, const CganModel& model);
CganModel read_model(std::istream& in);

}  // namespace fibergan

#endif

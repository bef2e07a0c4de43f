// SPDX-License-Identifier: Apache-2.0
#include "fibergan/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fibergan/binio.hpp"
#include "fibergan/errors.hpp"
#include "fibergan/rng.hpp"
#include "fibergan/threading.hpp"

namespace fibergan {

namespace {
// Fixed compute-chunk width: batches and symbol runs are always processed
// in slices of this many columns, which keeps results bit-identical for
// every worker count.
constexpr Eigen::Index kChunk = 16;
constexpr Eigen::Index kInferenceChunk = 256;
constexpr char kModelMagic[4] = {'F', 'G', 'N', 'N'};
constexpr std::uint32_t kModelVersion = 1;
}  // namespace

void validate(const WindowGeometry& geometry) {
  if (geometry.past_symbols < 0 || geometry.future_symbols < 0)
    throw ConfigError("window symbol counts must be >= 0");
  if (geometry.current_symbols < 1) throw ConfigError("current symbol count must be >= 1");
  if (geometry.sps < 1) throw ConfigError("sps must be >= 1");
}

void validate(const CganConfig& config) {
  validate(config.geometry);
  if (config.noise_dim < 1) throw ConfigError("noise dim must be >= 1");
  if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (config.batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(config.real_label_lo <= config.real_label_hi) ||
      !(config.fake_label_lo <= config.fake_label_hi))
    throw ConfigError("label ranges must be ordered");
  if (config.d_steps_per_g_step < 1) throw ConfigError("d steps per g step must be >= 1");
  if (!(config.adam_lr > 0.0)) throw ConfigError("learning rate must be positive");
}

MlpSpec make_generator_spec(const WindowGeometry& geometry, int noise_dim, double leaky_slope) {
  MlpSpec spec;
  spec.layer_widths = {noise_dim + geometry.condition_dim(), 288, 256, 64,
                       geometry.current_dim()};
  spec.activations = {Activation::leaky_relu, Activation::leaky_relu, Activation::leaky_relu,
                      Activation::tanh};
  spec.leaky_slope = leaky_slope;
  return spec;
}

MlpSpec make_discriminator_spec(const WindowGeometry& geometry, double leaky_slope) {
  MlpSpec spec;
  spec.layer_widths = {geometry.condition_dim() + geometry.current_dim(), 256, 256, 64, 1};
  spec.activations = {Activation::leaky_relu, Activation::leaky_relu, Activation::leaky_relu,
                      Activation::sigmoid};
  spec.leaky_slope = leaky_slope;
  return spec;
}

void validate(const CganModel& model) {
  validate(model.geometry);
  if (model.noise_dim < 1) throw ConfigError("noise dim must be >= 1");
  validate_against(model.generator, model.generator_spec);
  if (model.generator_spec.input_width() != model.noise_dim + model.geometry.condition_dim())
    throw ConfigError("generator input width must be noise_dim + condition_dim");
  if (model.generator_spec.output_width() != model.geometry.current_dim())
    throw ConfigError("generator output width must match the current-symbol dim");
  if (!model.is_fcnn()) {
    validate_against(model.discriminator, model.discriminator_spec);
    if (model.discriminator_spec.input_width() !=
        model.geometry.condition_dim() + model.geometry.current_dim())
      throw ConfigError("discriminator input width must be condition_dim + current_dim");
    if (model.discriminator_spec.output_width() != 1)
      throw ConfigError("discriminator output must be scalar");
  }
  if (!(model.scaler.scale > 0.0)) throw ConfigError("scaler scale must be positive");
}

Scaler fit_scaler(const Eigen::Ref<const MatrixXd>& conditions,
                  const Eigen::Ref<const MatrixXd>& targets) {
  if (conditions.size() == 0 && targets.size() == 0)
    throw ShapeError("cannot fit a scaler to an empty training set");
  const double max_abs = std::max(conditions.size() ? conditions.array().abs().maxCoeff() : 0.0,
                                  targets.size() ? targets.array().abs().maxCoeff() : 0.0);
  if (!(max_abs > 0.0)) throw DegenerateInputError("cannot fit a scaler to all-zero data");
  return Scaler{max_abs, 0.0};
}

VectorXd build_condition(const ComplexSignal& tx_samples, Eigen::Index symbol_index,
                         const WindowGeometry& geometry) {
  validate(geometry);
  const int sps = geometry.sps;
  const Eigen::Index n_symbols = tx_samples.samples.size() / sps;
  const Eigen::Index first = symbol_index - geometry.past_symbols;
  const Eigen::Index last = symbol_index + geometry.current_symbols + geometry.future_symbols;
  if (first < 0 || last > n_symbols)
    throw ShapeError("symbol window reaches outside the signal");
  VectorXd out(geometry.condition_dim());
  Eigen::Index k = 0;
  for (Eigen::Index s = first * sps; s < last * sps; ++s) {
    out[k++] = tx_samples.samples[s].real();
    out[k++] = tx_samples.samples[s].imag();
  }
  return out;
}

VectorXd build_target(const ComplexSignal& rx_samples, Eigen::Index symbol_index,
                      const WindowGeometry& geometry) {
  validate(geometry);
  const int sps = geometry.sps;
  const Eigen::Index n_symbols = rx_samples.samples.size() / sps;
  if (symbol_index - geometry.past_symbols < 0 ||
      symbol_index + geometry.current_symbols + geometry.future_symbols > n_symbols)
    throw ShapeError("symbol window reaches outside the signal");
  VectorXd out(geometry.current_dim());
  Eigen::Index k = 0;
  for (Eigen::Index s = symbol_index * sps;
       s < (symbol_index + geometry.current_symbols) * sps; ++s) {
    out[k++] = rx_samples.samples[s].real();
    out[k++] = rx_samples.samples[s].imag();
  }
  return out;
}

WindowDataset build_window_dataset(const ComplexSignal& tx, const ComplexSignal& rx,
                                   const WindowGeometry& geometry, int edge_discard_symbols) {
  validate(geometry);
  if (tx.samples.size() != rx.samples.size()) throw ShapeError("tx/rx lengths differ");
  const Eigen::Index n_symbols = tx.samples.size() / geometry.sps;
  const Eigen::Index lo =
      std::max<Eigen::Index>(edge_discard_symbols, geometry.past_symbols);
  const Eigen::Index hi = n_symbols - std::max<Eigen::Index>(
                                          edge_discard_symbols,
                                          geometry.future_symbols + geometry.current_symbols - 1);
  if (hi <= lo) throw ShapeError("no interior symbols left for windowing");
  WindowDataset set;
  set.conditions.resize(geometry.condition_dim(), hi - lo);
  set.targets.resize(geometry.current_dim(), hi - lo);
  for (Eigen::Index s = lo; s < hi; ++s) {
    set.conditions.col(s - lo) = build_condition(tx, s, geometry);
    set.targets.col(s - lo) = build_target(rx, s, geometry);
  }
  return set;
}

namespace {

struct LabelBatch {
  Eigen::ArrayXXd real;  // 1 x batch
  Eigen::ArrayXXd fake;
};

// All stochastic inputs of one batch, drawn sequentially up front so the
// chunked compute below cannot affect the stream.
struct BatchDraws {
  MatrixXd noise_d;  // noise_dim x batch, for the discriminator step
  MatrixXd noise_g;  // fresh draw for the generator step
  LabelBatch labels;
};

BatchDraws draw_batch(SplitMix64& noise_rng, SplitMix64& label_rng, int noise_dim,
                      Eigen::Index batch, const CganConfig& cfg) {
  BatchDraws d;
  d.noise_d.resize(noise_dim, batch);
  for (Eigen::Index c = 0; c < batch; ++c)
    for (int r = 0; r < noise_dim; ++r) d.noise_d(r, c) = noise_rng.gaussian();
  d.noise_g.resize(noise_dim, batch);
  for (Eigen::Index c = 0; c < batch; ++c)
    for (int r = 0; r < noise_dim; ++r) d.noise_g(r, c) = noise_rng.gaussian();
  d.labels.real.resize(1, batch);
  d.labels.fake.resize(1, batch);
  for (Eigen::Index c = 0; c < batch; ++c)
    d.labels.real(0, c) = label_rng.uniform(cfg.real_label_lo, cfg.real_label_hi);
  for (Eigen::Index c = 0; c < batch; ++c)
    d.labels.fake(0, c) = label_rng.uniform(cfg.fake_label_lo, cfg.fake_label_hi);
  return d;
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  SplitMix64 rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return idx;
}

MatrixXd gather_columns(const Eigen::Ref<const MatrixXd>& data,
                        const std::vector<Eigen::Index>& order, Eigen::Index begin,
                        Eigen::Index count) {
  MatrixXd out(data.rows(), count);
  for (Eigen::Index c = 0; c < count; ++c)
    out.col(c) = data.col(order[static_cast<std::size_t>(begin + c)]);
  return out;
}

// Per-chunk forward/backward over a fixed slicing of the batch; partial
// gradients are reduced in chunk order afterwards.
template <typename Fn>
void for_each_chunk(Eigen::Index batch, const Fn& fn) {
  parallel_chunks(static_cast<std::size_t>(batch), static_cast<std::size_t>(kChunk),
                  [&](std::size_t begin, std::size_t len, std::size_t chunk_idx) {
                    fn(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(len),
                       static_cast<std::size_t>(chunk_idx));
                  });
}

std::size_t chunk_count(Eigen::Index batch) {
  return static_cast<std::size_t>((batch + kChunk - 1) / kChunk);
}

}  // namespace

CganModel train_cgan(const Eigen::Ref<const MatrixXd>& conditions,
                     const Eigen::Ref<const MatrixXd>& targets, const CganConfig& config,
                     std::vector<EpochLoss>* trace, const CheckpointFn& checkpoint) {
  validate(config);
  const Eigen::Index n = conditions.cols();
  if (n == 0 || targets.cols() != n) throw ConfigError("empty or misaligned training set");
  if (conditions.rows() != config.geometry.condition_dim() ||
      targets.rows() != config.geometry.current_dim())
    throw ShapeError("window dimensions do not match the geometry");
  if (n < config.batch_size) throw ConfigError("dataset smaller than one batch");

  CganModel model;
  model.geometry = config.geometry;
  model.noise_dim = config.noise_dim;
  model.scaler = fit_scaler(conditions, targets);
  model.generator_spec = make_generator_spec(config.geometry, config.noise_dim,
                                             config.leaky_slope);
  model.discriminator_spec = make_discriminator_spec(config.geometry, config.leaky_slope);
  model.generator = init_params(model.generator_spec,
                                derive_seed(config.seed, seed_stream::kGeneratorInit));
  model.discriminator = init_params(model.discriminator_spec,
                                    derive_seed(config.seed, seed_stream::kDiscriminatorInit));

  const MatrixXd cond_scaled = conditions / model.scaler.scale;
  const MatrixXd targ_scaled = targets / model.scaler.scale;

  AdamState adam_g = make_adam_state(model.generator_spec, config.adam_lr, config.adam_beta1);
  AdamState adam_d = make_adam_state(model.discriminator_spec, config.adam_lr,
                                     config.adam_beta1);

  const int cond_dim = config.geometry.condition_dim();
  const int out_dim = config.geometry.current_dim();
  const Eigen::Index batch_size = config.batch_size;
  const Eigen::Index n_batches = n / batch_size;
  if (trace) trace->clear();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(
        n, derive_seed(config.seed, seed_stream::kShuffle, static_cast<std::uint64_t>(epoch)));
    SplitMix64 noise_rng(derive_seed(config.seed, seed_stream::kTrainingNoise,
                                     static_cast<std::uint64_t>(epoch)));
    SplitMix64 label_rng(derive_seed(config.seed, seed_stream::kLabels,
                                     static_cast<std::uint64_t>(epoch)));

    double epoch_d_loss = 0.0, epoch_g_loss = 0.0;
    Eigen::Index g_steps = 0;

    for (Eigen::Index b = 0; b < n_batches; ++b) {
      try {
        const MatrixXd cond_b = gather_columns(cond_scaled, order, b * batch_size, batch_size);
        const MatrixXd targ_b = gather_columns(targ_scaled, order, b * batch_size, batch_size);
        const BatchDraws draws =
            draw_batch(noise_rng, label_rng, config.noise_dim, batch_size, config);

        // Discriminator update: real pairs toward the smoothed real labels,
        // generated pairs toward the fake labels.
        {
          const std::size_t n_chunks = chunk_count(batch_size);
          std::vector<MlpGrads> partials(n_chunks);
          std::vector<double> losses(n_chunks, 0.0);
          for_each_chunk(batch_size, [&](Eigen::Index begin, Eigen::Index len,
                                         std::size_t chunk_idx) {
            MatrixXd g_in(model.generator_spec.input_width(), len);
            g_in.topRows(config.noise_dim) = draws.noise_d.middleCols(begin, len);
            g_in.bottomRows(cond_dim) = cond_b.middleCols(begin, len);
            const MatrixXd fake = forward(model.generator, model.generator_spec, g_in);

            MatrixXd d_in(model.discriminator_spec.input_width(), 2 * len);
            d_in.topRows(cond_dim).leftCols(len) = cond_b.middleCols(begin, len);
            d_in.bottomRows(out_dim).leftCols(len) = targ_b.middleCols(begin, len);
            d_in.topRows(cond_dim).rightCols(len) = cond_b.middleCols(begin, len);
            d_in.bottomRows(out_dim).rightCols(len) = fake;

            ForwardCache cache;
            const MatrixXd pred = forward(model.discriminator, model.discriminator_spec, d_in,
                                          &cache);
            Eigen::ArrayXXd labels(1, 2 * len);
            labels.leftCols(len) = draws.labels.real.middleCols(begin, len);
            labels.rightCols(len) = draws.labels.fake.middleCols(begin, len);
            auto [chunk_loss, chunk_grad] = bce_loss(pred.array(), labels);
            // Rescale the chunk mean to this chunk's share of the batch mean.
            const double share = static_cast<double>(2 * len) / static_cast<double>(2 * batch_size);
            losses[chunk_idx] = chunk_loss * share;
            partials[chunk_idx] = backward(model.discriminator, model.discriminator_spec, cache,
                                           (chunk_grad * share).matrix());
          });
          MlpGrads grads = zero_grads(model.discriminator_spec);
          for (std::size_t c = 0; c < n_chunks; ++c) {
            accumulate(grads, partials[c]);
            epoch_d_loss += losses[c];
          }
          adam_step(model.discriminator, grads, adam_d);
        }

        // Generator update every d_steps_per_g_step batches: fresh noise,
        // gradients reach the generator through the discriminator input.
        if ((b + 1) % config.d_steps_per_g_step == 0) {
          const std::size_t n_chunks = chunk_count(batch_size);
          std::vector<MlpGrads> partials(n_chunks);
          std::vector<double> losses(n_chunks, 0.0);
          for_each_chunk(batch_size, [&](Eigen::Index begin, Eigen::Index len,
                                         std::size_t chunk_idx) {
            MatrixXd g_in(model.generator_spec.input_width(), len);
            g_in.topRows(config.noise_dim) = draws.noise_g.middleCols(begin, len);
            g_in.bottomRows(cond_dim) = cond_b.middleCols(begin, len);
            ForwardCache g_cache;
            const MatrixXd fake = forward(model.generator, model.generator_spec, g_in, &g_cache);

            MatrixXd d_in(model.discriminator_spec.input_width(), len);
            d_in.topRows(cond_dim) = cond_b.middleCols(begin, len);
            d_in.bottomRows(out_dim) = fake;
            ForwardCache d_cache;
            const MatrixXd pred = forward(model.discriminator, model.discriminator_spec, d_in,
                                          &d_cache);
            const Eigen::ArrayXXd ones = Eigen::ArrayXXd::Ones(1, len);
            auto [chunk_loss, chunk_grad] = bce_loss(pred.array(), ones);
            const double share = static_cast<double>(len) / static_cast<double>(batch_size);
            losses[chunk_idx] = chunk_loss * share;
            MatrixXd d_input_grad;
            backward(model.discriminator, model.discriminator_spec, d_cache,
                     (chunk_grad * share).matrix(), &d_input_grad,
                     /*want_param_grads=*/false);
            partials[chunk_idx] = backward(model.generator, model.generator_spec, g_cache,
                                           d_input_grad.bottomRows(out_dim));
          });
          MlpGrads grads = zero_grads(model.generator_spec);
          for (std::size_t c = 0; c < n_chunks; ++c) {
            accumulate(grads, partials[c]);
            epoch_g_loss += losses[c];
          }
          adam_step(model.generator, grads, adam_g);
          ++g_steps;
        }
      } catch (const std::range_error& e) {
        throw TrainingDivergedError(std::string("training diverged: ") + e.what(), epoch);
      }
    }

    EpochLoss row;
    row.epoch = epoch;
    row.d_loss = epoch_d_loss / static_cast<double>(n_batches);
    row.g_loss = g_steps > 0 ? epoch_g_loss / static_cast<double>(g_steps) : 0.0;
    if (!std::isfinite(row.d_loss) || !std::isfinite(row.g_loss))
      throw TrainingDivergedError("non-finite loss", epoch);
    if (trace) trace->push_back(row);
    if (checkpoint && config.checkpoint_every_epochs > 0 &&
        (epoch + 1) % config.checkpoint_every_epochs == 0)
      checkpoint(epoch, model);
  }
  return model;
}

CganModel train_fcnn(const Eigen::Ref<const MatrixXd>& conditions,
                     const Eigen::Ref<const MatrixXd>& targets, const CganConfig& config,
                     std::vector<EpochLoss>* trace) {
  validate(config);
  const Eigen::Index n = conditions.cols();
  if (n == 0 || targets.cols() != n) throw ConfigError("empty or misaligned training set");
  if (conditions.rows() != config.geometry.condition_dim() ||
      targets.rows() != config.geometry.current_dim())
    throw ShapeError("window dimensions do not match the geometry");
  if (n < config.batch_size) throw ConfigError("dataset smaller than one batch");

  CganModel model;
  model.geometry = config.geometry;
  model.noise_dim = config.noise_dim;
  model.scaler = fit_scaler(conditions, targets);
  model.generator_spec = make_generator_spec(config.geometry, config.noise_dim,
                                             config.leaky_slope);
  model.generator = init_params(model.generator_spec,
                                derive_seed(config.seed, seed_stream::kGeneratorInit));

  const MatrixXd cond_scaled = conditions / model.scaler.scale;
  const MatrixXd targ_scaled = targets / model.scaler.scale;

  AdamState adam = make_adam_state(model.generator_spec, config.adam_lr, config.adam_beta1);
  const int cond_dim = config.geometry.condition_dim();
  const Eigen::Index batch_size = config.batch_size;
  const Eigen::Index n_batches = n / batch_size;
  if (trace) trace->clear();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(
        n, derive_seed(config.seed, seed_stream::kShuffle, static_cast<std::uint64_t>(epoch)));
    double epoch_loss = 0.0;

    for (Eigen::Index b = 0; b < n_batches; ++b) {
      const MatrixXd cond_b = gather_columns(cond_scaled, order, b * batch_size, batch_size);
      const MatrixXd targ_b = gather_columns(targ_scaled, order, b * batch_size, batch_size);

      const std::size_t n_chunks = chunk_count(batch_size);
      std::vector<MlpGrads> partials(n_chunks);
      std::vector<double> losses(n_chunks, 0.0);
      for_each_chunk(batch_size, [&](Eigen::Index begin, Eigen::Index len,
                                     std::size_t chunk_idx) {
        MatrixXd in = MatrixXd::Zero(model.generator_spec.input_width(), len);
        in.bottomRows(cond_dim) = cond_b.middleCols(begin, len);
        ForwardCache cache;
        const MatrixXd pred = forward(model.generator, model.generator_spec, in, &cache);
        auto [chunk_loss, chunk_grad] =
            mse_loss(pred.array(), targ_b.middleCols(begin, len).array());
        const double share = static_cast<double>(len) / static_cast<double>(batch_size);
        losses[chunk_idx] = chunk_loss * share;
        partials[chunk_idx] = backward(model.generator, model.generator_spec, cache,
                                       (chunk_grad * share).matrix());
      });
      MlpGrads grads = zero_grads(model.generator_spec);
      for (std::size_t c = 0; c < n_chunks; ++c) {
        accumulate(grads, partials[c]);
        epoch_loss += losses[c];
      }
      adam_step(model.generator, grads, adam);
    }

    EpochLoss row;
    row.epoch = epoch;
    row.d_loss = epoch_loss / static_cast<double>(n_batches);
    row.g_loss = row.d_loss;
    if (!std::isfinite(row.d_loss)) throw TrainingDivergedError("non-finite loss", epoch);
    if (trace) trace->push_back(row);
  }
  return model;
}

VectorXd surrogate_sample(const CganModel& model, const Eigen::Ref<const VectorXd>& condition,
                          std::uint64_t noise_seed) {
  if (condition.size() != model.geometry.condition_dim())
    throw ShapeError("condition width mismatch");
  VectorXd in = VectorXd::Zero(model.generator_spec.input_width());
  if (!model.is_fcnn()) {
    SplitMix64 rng(noise_seed);
    for (int r = 0; r < model.noise_dim; ++r) in[r] = rng.gaussian();
  }
  in.tail(model.geometry.condition_dim()) = condition / model.scaler.scale;
  const VectorXd raw = forward(model.generator, model.generator_spec, in);
  return raw * model.scaler.scale;
}

ComplexSignal generate_channel_output(const CganModel& model, const ComplexSignal& tx_samples,
                                      std::uint64_t seed) {
  validate(model);
  const WindowGeometry& geom = model.geometry;
  const int sps = geom.sps;
  const Eigen::Index n_symbols = tx_samples.samples.size() / sps;
  const Eigen::Index lo = geom.past_symbols;
  const Eigen::Index hi = n_symbols - geom.future_symbols - (geom.current_symbols - 1);
  if (hi <= lo) throw ShapeError("signal shorter than one full window");

  ArrayXcd out = ArrayXcd::Zero(tx_samples.samples.size());
  const Eigen::Index n_interior = hi - lo;
  const int cond_dim = geom.condition_dim();
  const int cur_dim = geom.current_dim();

  parallel_chunks(
      static_cast<std::size_t>(n_interior), static_cast<std::size_t>(kInferenceChunk),
      [&](std::size_t begin, std::size_t len, std::size_t) {
        MatrixXd in = MatrixXd::Zero(model.generator_spec.input_width(),
                                     static_cast<Eigen::Index>(len));
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(len); ++c) {
          const Eigen::Index sym = lo + static_cast<Eigen::Index>(begin) + c;
          if (!model.is_fcnn()) {
            SplitMix64 rng(derive_seed(seed, seed_stream::kInferenceNoise,
                                       static_cast<std::uint64_t>(sym)));
            for (int r = 0; r < model.noise_dim; ++r) in(r, c) = rng.gaussian();
          }
          in.col(c).tail(cond_dim) =
              build_condition(tx_samples, sym, geom) / model.scaler.scale;
        }
        const MatrixXd raw = forward(model.generator, model.generator_spec, in);
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(len); ++c) {
          const Eigen::Index sym = lo + static_cast<Eigen::Index>(begin) + c;
          for (int k = 0; k < cur_dim / 2; ++k) {
            out[sym * sps + k] = Complex(raw(2 * k, c) * model.scaler.scale,
                                         raw(2 * k + 1, c) * model.scaler.scale);
          }
        }
      });

  return {std::move(out), tx_samples.sample_rate_hz};
}

void write_model(std::ostream& out, const CganModel& model) {
  validate(model);
  out.write(kModelMagic, sizeof(kModelMagic));
  write_pod(out, kModelVersion);
  write_mlp(out, model.generator, model.generator_spec);
  if (model.is_fcnn()) {
    write_pod(out, std::uint32_t{0});
  } else {
    write_mlp(out, model.discriminator, model.discriminator_spec);
  }
  write_pod(out, model.scaler.scale);
  write_pod(out, model.scaler.offset);
  write_pod(out, static_cast<std::uint32_t>(model.geometry.past_symbols));
  write_pod(out, static_cast<std::uint32_t>(model.geometry.current_symbols));
  write_pod(out, static_cast<std::uint32_t>(model.geometry.future_symbols));
  write_pod(out, static_cast<std::uint32_t>(model.geometry.sps));
  write_pod(out, static_cast<std::uint32_t>(model.noise_dim));
  if (!out) throw IoError("model write failed");
}

CganModel read_model(std::istream& in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kModelMagic, 4) != 0)
    throw IoError("not a model file (bad magic)");
  std::uint32_t version = 0;
  read_pod(in, version);
  if (version != kModelVersion) throw IoError("unsupported model version");
  CganModel model;
  read_mlp(in, model.generator, model.generator_spec);
  read_mlp(in, model.discriminator, model.discriminator_spec);
  read_pod(in, model.scaler.scale);
  read_pod(in, model.scaler.offset);
  std::uint32_t past = 0, current = 0, future = 0, sps = 0, noise = 0;
  read_pod(in, past);
  read_pod(in, current);
  read_pod(in, future);
  read_pod(in, sps);
  read_pod(in, noise);
  model.geometry.past_symbols = static_cast<int>(past);
  model.geometry.current_symbols = static_cast<int>(current);
  model.geometry.future_symbols = static_cast<int>(future);
  model.geometry.sps = static_cast<int>(sps);
  model.noise_dim = static_cast<int>(noise);
  validate(model);
  return model;
}

void save_model(const std::string& path, const CganModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_model(out, model);
  if (!out) throw IoError("write failed: " + path);
}

CganModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_model(in);
}

}  // namespace fibergan

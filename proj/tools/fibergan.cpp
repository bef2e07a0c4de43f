// SPDX-License-Identifier: Apache-2.0
//
// Single binary exposing the whole pipeline: simulate | train | generate |
// evaluate | bench. Flags override values from an optional key-value config
// file (--config). FIBERGAN_THREADS caps worker threads (0 = auto).

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fibergan/errors.hpp"
#include "fibergan/harness.hpp"

namespace fg = fibergan;

namespace {

void echo(const std::string& line) { std::cout << "config: " << line << "\n"; }

std::string loss_csv_path(const std::string& model_path) { return model_path + ".loss.csv"; }

void write_loss_csv(const std::string& path, const std::vector<fg::EpochLoss>& trace,
                    bool is_cgan) {
  std::ofstream out(path);
  if (!out) throw fg::IoError("cannot open for writing: " + path);
  out << (is_cgan ? "epoch,d_loss,g_loss\n" : "epoch,mse\n");
  char buf[128];
  for (const fg::EpochLoss& row : trace) {
    if (is_cgan)
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.epoch, row.d_loss, row.g_loss);
    else
      std::snprintf(buf, sizeof(buf), "%d,%.17g\n", row.epoch, row.d_loss);
    out << buf;
  }
}

int cmd_simulate(const fg::TxConfig& tx, fg::FiberParams fiber, fg::NoiseConfig noise,
                 std::uint64_t symbols, std::uint32_t block_symbols, std::uint64_t seed,
                 const std::string& out_path) {
  const fg::DatasetFile data =
      fg::generate_dataset(tx, fiber, noise, symbols, block_symbols, seed);
  fg::write_dataset(out_path, data);

  double power = 0.0;
  std::uint64_t samples = 0;
  for (const auto& block : data.tx_blocks) {
    power += block.abs2().sum();
    samples += static_cast<std::uint64_t>(block.size());
  }
  const std::size_t steps = fg::ssfm_step_sizes_m(fiber).size();
  std::cout << "symbols: " << static_cast<std::uint64_t>(data.block_count()) * block_symbols
            << "\nmean launch power: " << power / static_cast<double>(samples)
            << " W\nsteps per block: " << steps << "\nblocks: " << data.block_count()
            << "\nwrote " << out_path << "\n";
  return 0;
}

int cmd_train(const std::string& kind, const std::string& data_path, fg::CganConfig config,
              const std::string& out_path, const std::string& loss_path) {
  const fg::DatasetFile data = fg::read_dataset(data_path);
  config.geometry.sps = data.meta.tx.sps;
  const fg::WindowDataset pairs = fg::collect_training_pairs(data, config.geometry);
  std::cout << "training pairs: " << pairs.conditions.cols() << "\n";

  std::vector<fg::EpochLoss> trace;
  fg::CganModel model;
  if (kind == "cgan") {
    fg::CheckpointFn checkpoint;
    if (config.checkpoint_every_epochs > 0) {
      checkpoint = [&](int epoch, const fg::CganModel& m) {
        fg::save_model(out_path + ".epoch" + std::to_string(epoch + 1), m);
      };
    }
    model = fg::train_cgan(pairs.conditions, pairs.targets, config, &trace, checkpoint);
  } else {
    model = fg::train_fcnn(pairs.conditions, pairs.targets, config, &trace);
  }
  fg::save_model(out_path, model);
  write_loss_csv(loss_path, trace, kind == "cgan");
  std::cout << "wrote " << out_path << " and " << loss_path << "\n";
  return 0;
}

int cmd_generate(const std::string& model_path, const std::string& data_path,
                 std::uint64_t seed, const std::string& out_path) {
  const fg::CganModel model = fg::load_model(model_path);
  const fg::DatasetFile input = fg::read_dataset(data_path);
  const fg::DatasetFile output =
      fg::generate_surrogate_dataset(model, input, seed, model_path);
  fg::write_dataset(out_path, output);
  std::cout << "blocks: " << output.block_count() << "\nwrote " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& ssfm_path, const std::string& gen_path,
                 const std::string& dsp_name, double dbp_steps_per_km,
                 const std::string& report_path, const std::string& constellations_dir,
                 const std::string& gen_label) {
  const fg::DatasetFile channel = fg::read_dataset(ssfm_path);
  const fg::DatasetFile surrogate = fg::read_dataset(gen_path);

  fg::DspConfig dsp;
  dsp.mode = fg::dsp_mode_from_string(dsp_name);
  dsp.dbp_steps_per_km = dbp_steps_per_km;
  const fg::PairEvaluation eval = fg::evaluate_pair(channel, surrogate, dsp);
  fg::write_eval_report(report_path, {eval.row});
  std::cout << "ber_ssfm: " << eval.row.ber_ssfm << "\nber_surrogate: " << eval.row.ber_surrogate
            << "\ndelta_ber: " << eval.row.delta_ber << "\ntotal_bits: " << eval.row.total_bits
            << "\nwrote " << report_path << "\n";

  if (!constellations_dir.empty()) {
    std::filesystem::create_directories(constellations_dir);
    for (const fg::DspMode mode :
         {fg::DspMode::none, fg::DspMode::cd_only, fg::DspMode::dbp}) {
      fg::DspConfig panel_dsp = dsp;
      panel_dsp.mode = mode;
      const fg::PairEvaluation panel = fg::evaluate_pair(channel, surrogate, panel_dsp);
      const std::string stage = fg::to_string(mode);
      fg::export_constellation(panel.constellation_ssfm, "ssfm_" + stage,
                               constellations_dir + "/constellation_" + stage + "_ssfm.csv");
      fg::export_constellation(panel.constellation_surrogate, gen_label + "_" + stage,
                               constellations_dir + "/constellation_" + stage + "_" +
                                   gen_label + ".csv");
    }
    std::cout << "wrote constellations to " << constellations_dir << "\n";
  }
  return 0;
}

int cmd_bench(const std::vector<double>& distances, const std::string& model_path,
              const fg::TxConfig& tx, const fg::FiberParams& fiber, int repeats,
              const std::string& out_path) {
  const fg::CganModel model = fg::load_model(model_path);
  const std::vector<fg::BenchRow> rows =
      fg::bench_runtime(distances, tx, fiber, model, repeats);
  fg::write_bench_table(out_path, rows, repeats);
  for (const fg::BenchRow& row : rows)
    std::cout << row.distance_km << " km: ssfm " << row.t_ssfm_s << " s, surrogate "
              << row.t_surrogate_s << " s\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiber channel simulation and surrogate toolkit"};
  app.set_config("--config", "", "key-value config file; command-line flags win");
  app.require_subcommand(1);

  fg::TxConfig tx;
  fg::FiberParams fiber;
  fg::NoiseConfig noise;
  fg::CganConfig train_cfg;

  auto add_tx_flags = [&](CLI::App* cmd) {
    cmd->add_option("--symbol-rate", tx.symbol_rate_baud, "symbol rate in baud");
    cmd->add_option("--sps", tx.sps, "samples per symbol");
    cmd->add_option("--rolloff", tx.rolloff, "RRC roll-off in (0,1]");
    cmd->add_option("--rrc-span", tx.rrc_span_symbols, "RRC span in symbols (even)");
    cmd->add_option("--power-dbm", tx.launch_power_dbm, "launch power in dBm");
  };
  auto add_fiber_flags = [&](CLI::App* cmd) {
    cmd->add_option("--distance-km", fiber.length_km, "fiber length in km");
    cmd->add_option("--step-km", fiber.step_km, "split-step size in km");
    cmd->add_option("--dispersion", fiber.dispersion_ps_nm_km, "D in ps/nm/km");
    cmd->add_option("--gamma", fiber.gamma_per_w_km, "nonlinear coefficient in 1/W/km");
    cmd->add_option("--alpha", fiber.alpha_db_km, "attenuation in dB/km");
    cmd->add_option("--wavelength-nm", fiber.wavelength_nm, "wavelength in nm");
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a split-step channel dataset");
  std::uint64_t sim_symbols = 100000, sim_seed = 1;
  std::uint32_t sim_block = 1024;
  std::string sim_out;
  bool sim_no_noise = false;
  add_tx_flags(sim);
  add_fiber_flags(sim);
  sim->add_option("--symbols", sim_symbols, "total symbols (rounded up to whole blocks)");
  sim->add_option("--block-symbols", sim_block, "symbols per block (block*sps a power of two)");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--noise-snr-db", noise.snr_db, "output SNR in dB");
  sim->add_flag("--no-noise", sim_no_noise, "disable output noise");
  sim->add_option("--out", sim_out, "output dataset path")->required();

  // train
  auto* train = app.add_subcommand("train", "fit a surrogate on a dataset");
  std::string train_kind = "cgan", train_data, train_out, train_loss;
  train->add_option("--model", train_kind, "cgan or fcnn")
      ->check(CLI::IsMember({"cgan", "fcnn"}));
  train->add_option("--data", train_data, "training dataset path")->required();
  train->add_option("--epochs", train_cfg.epochs, "training epochs");
  train->add_option("--batch-size", train_cfg.batch_size, "mini-batch size");
  train->add_option("--seed", train_cfg.seed, "training seed");
  train->add_option("--lr", train_cfg.adam_lr, "adam learning rate");
  train->add_option("--beta1", train_cfg.adam_beta1, "adam beta1");
  train->add_option("--noise-dim", train_cfg.noise_dim, "generator noise width");
  train->add_option("--past", train_cfg.geometry.past_symbols, "past symbols in the window");
  train->add_option("--future", train_cfg.geometry.future_symbols,
                    "future symbols in the window");
  train->add_option("--d-steps", train_cfg.d_steps_per_g_step,
                    "discriminator steps per generator step");
  train->add_option("--checkpoint-every", train_cfg.checkpoint_every_epochs,
                    "save a checkpoint every K epochs (0 = off)");
  train->add_option("--out", train_out, "output model path")->required();
  train->add_option("--loss-out", train_loss, "loss trace CSV (default <out>.loss.csv)");

  // generate
  auto* gen = app.add_subcommand("generate", "replace the channel with a trained surrogate");
  std::string gen_model, gen_data, gen_out;
  std::uint64_t gen_seed = 1;
  gen->add_option("--model", gen_model, "model path")->required();
  gen->add_option("--data", gen_data, "dataset supplying tx waveforms")->required();
  gen->add_option("--seed", gen_seed, "generation noise seed");
  gen->add_option("--out", gen_out, "output dataset path")->required();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "compare channel and surrogate data");
  std::string eval_ssfm, eval_gen, eval_dsp = "dbp", eval_report, eval_dir, eval_label = "gen";
  double eval_dbp_steps = 100.0;
  eval->add_option("--ssfm", eval_ssfm, "channel dataset path")->required();
  eval->add_option("--gen", eval_gen, "surrogate dataset path")->required();
  eval->add_option("--dsp", eval_dsp, "receiver mode")
      ->check(CLI::IsMember({"none", "cd", "dbp"}));
  eval->add_option("--dbp-steps-per-km", eval_dbp_steps, "DBP step density");
  eval->add_option("--report", eval_report, "report CSV path")->required();
  eval->add_option("--constellations-dir", eval_dir,
                   "export aligned constellations for all three modes");
  eval->add_option("--gen-label", eval_label, "stage label for the surrogate data");

  // bench
  auto* bench = app.add_subcommand("bench", "time the channel against the surrogate");
  std::vector<double> bench_distances{20.0, 40.0, 60.0, 80.0};
  std::string bench_model, bench_out = "bench.csv";
  int bench_repeats = 5;
  add_tx_flags(bench);
  add_fiber_flags(bench);
  bench->add_option("--distances", bench_distances, "comma-separated distances in km")
      ->delimiter(',');
  bench->add_option("--model", bench_model, "model path")->required();
  bench->add_option("--repeats", bench_repeats, "repeats per distance (>= 3)");
  bench->add_option("--out", bench_out, "timing CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      tx.seed = sim_seed;
      noise.enabled = !sim_no_noise;
      noise.seed = sim_seed;
      echo("distance_km=" + std::to_string(fiber.length_km) +
           " power_dbm=" + std::to_string(tx.launch_power_dbm) +
           " step_km=" + std::to_string(fiber.step_km) +
           " noise=" + (noise.enabled ? "snr_db=" + std::to_string(noise.snr_db) : "off") +
           " seed=" + std::to_string(sim_seed));
      return cmd_simulate(tx, fiber, noise, sim_symbols, sim_block, sim_seed, sim_out);
    }
    if (train->parsed()) {
      echo("model=" + train_kind + " epochs=" + std::to_string(train_cfg.epochs) +
           " batch=" + std::to_string(train_cfg.batch_size) +
           " lr=" + std::to_string(train_cfg.adam_lr) +
           " seed=" + std::to_string(train_cfg.seed));
      if (train_loss.empty()) train_loss = loss_csv_path(train_out);
      return cmd_train(train_kind, train_data, train_cfg, train_out, train_loss);
    }
    if (gen->parsed()) {
      echo("model=" + gen_model + " seed=" + std::to_string(gen_seed));
      return cmd_generate(gen_model, gen_data, gen_seed, gen_out);
    }
    if (eval->parsed()) {
      echo("dsp=" + eval_dsp + " dbp_steps_per_km=" + std::to_string(eval_dbp_steps));
      return cmd_evaluate(eval_ssfm, eval_gen, eval_dsp, eval_dbp_steps, eval_report, eval_dir,
                          eval_label);
    }
    if (bench->parsed()) {
      echo("repeats=" + std::to_string(bench_repeats));
      return cmd_bench(bench_distances, bench_model, tx, fiber, bench_repeats, bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// SPDX-License-Identifier: Apache-2.0
#include "fibergan/dataset.hpp"

#include <cstring>
#include <fstream>

#include "fibergan/binio.hpp"
#include "fibergan/fft.hpp"
#include "fibergan/rng.hpp"
#include "fibergan/threading.hpp"

namespace fibergan {

namespace {
constexpr char kDatasetMagic[4] = {'F', 'G', 'D', 'S'};
constexpr std::uint32_t kDatasetVersion = 1;
}  // namespace

BitStream block_bits(const DatasetMeta& meta, std::size_t index) {
  return random_bits(static_cast<std::size_t>(meta.block_symbols) * 4,
                     derive_seed(meta.master_seed, seed_stream::kBits, index));
}

DatasetFile generate_dataset(const TxConfig& tx, const FiberParams& fiber,
                             const NoiseConfig& noise, std::uint64_t n_symbols,
                             std::uint32_t block_symbols, std::uint64_t master_seed,
                             std::uint32_t edge_discard_symbols) {
  validate(tx);
  validate(fiber);
  if (block_symbols == 0 || !is_power_of_two(static_cast<Eigen::Index>(block_symbols) * tx.sps))
    throw ConfigError("block_symbols * sps must be a power of two");
  if (n_symbols < block_symbols) throw ConfigError("need at least one full block of symbols");

  DatasetFile data;
  data.meta.tx = tx;
  data.meta.fiber = fiber;
  data.meta.noise = noise;
  data.meta.master_seed = master_seed;
  data.meta.block_symbols = block_symbols;
  data.meta.edge_discard_symbols = edge_discard_symbols;
  data.meta.n_symbols = n_symbols;

  const std::size_t n_blocks =
      static_cast<std::size_t>((n_symbols + block_symbols - 1) / block_symbols);
  data.tx_blocks.resize(n_blocks);
  data.rx_blocks.resize(n_blocks);

  parallel_chunks(n_blocks, 1, [&](std::size_t begin, std::size_t, std::size_t) {
    const std::size_t i = begin;
    const BitStream bits = block_bits(data.meta, i);
    const ComplexSignal tx_block = tx_waveform(bits, tx);
    NoiseConfig block_noise = noise;
    block_noise.seed = derive_seed(master_seed, seed_stream::kChannelNoise, i);
    const ComplexSignal rx_block = propagate_ssfm(tx_block, fiber, block_noise);
    data.tx_blocks[i] = tx_block.samples;
    data.rx_blocks[i] = rx_block.samples;
  });
  return data;
}

DatasetFile regenerate_dataset(const DatasetMeta& meta) {
  DatasetFile data = generate_dataset(meta.tx, meta.fiber, meta.noise, meta.n_symbols,
                                      meta.block_symbols, meta.master_seed,
                                      meta.edge_discard_symbols);
  data.meta.provenance = meta.provenance;
  return data;
}

void write_dataset(std::ostream& out, const DatasetFile& data) {
  // Field order: magic, version, tx config (symbol_rate f64, sps u32,
  // rolloff f64, span u32, power f64, seed u64), fiber (length, step, D,
  // gamma, alpha, wavelength: f64 each), noise (enabled u32, snr f64,
  // seed u64), master seed u64, block symbols u32, edge discard u32,
  // symbol count u64, block count u32, per block (sample count u64,
  // tx re/im f64 pairs, rx re/im f64 pairs), provenance string.
  out.write(kDatasetMagic, sizeof(kDatasetMagic));
  write_pod(out, kDatasetVersion);
  const DatasetMeta& m = data.meta;
  write_pod(out, m.tx.symbol_rate_baud);
  write_pod(out, static_cast<std::uint32_t>(m.tx.sps));
  write_pod(out, m.tx.rolloff);
  write_pod(out, static_cast<std::uint32_t>(m.tx.rrc_span_symbols));
  write_pod(out, m.tx.launch_power_dbm);
  write_pod(out, m.tx.seed);
  write_pod(out, m.fiber.length_km);
  write_pod(out, m.fiber.step_km);
  write_pod(out, m.fiber.dispersion_ps_nm_km);
  write_pod(out, m.fiber.gamma_per_w_km);
  write_pod(out, m.fiber.alpha_db_km);
  write_pod(out, m.fiber.wavelength_nm);
  write_pod(out, static_cast<std::uint32_t>(m.noise.enabled ? 1 : 0));
  write_pod(out, m.noise.snr_db);
  write_pod(out, m.noise.seed);
  write_pod(out, m.master_seed);
  write_pod(out, m.block_symbols);
  write_pod(out, m.edge_discard_symbols);
  write_pod(out, m.n_symbols);
  write_pod(out, static_cast<std::uint32_t>(data.block_count()));
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    const ArrayXcd& tx = data.tx_blocks[b];
    const ArrayXcd& rx = data.rx_blocks[b];
    if (tx.size() != rx.size()) throw ShapeError("tx/rx block lengths differ");
    write_pod(out, static_cast<std::uint64_t>(tx.size()));
    for (Eigen::Index i = 0; i < tx.size(); ++i) {
      write_pod(out, tx[i].real());
      write_pod(out, tx[i].imag());
    }
    for (Eigen::Index i = 0; i < rx.size(); ++i) {
      write_pod(out, rx[i].real());
      write_pod(out, rx[i].imag());
    }
  }
  write_string(out, m.provenance);
  if (!out) throw IoError("dataset write failed");
}

DatasetFile read_dataset(std::istream& in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDatasetMagic, 4) != 0)
    throw IoError("not a dataset file (bad magic)");
  std::uint32_t version = 0;
  read_pod(in, version);
  if (version != kDatasetVersion) throw IoError("unsupported dataset version");

  DatasetFile data;
  DatasetMeta& m = data.meta;
  std::uint32_t sps = 0, span = 0, enabled = 0, block_count = 0;
  read_pod(in, m.tx.symbol_rate_baud);
  read_pod(in, sps);
  read_pod(in, m.tx.rolloff);
  read_pod(in, span);
  read_pod(in, m.tx.launch_power_dbm);
  read_pod(in, m.tx.seed);
  m.tx.sps = static_cast<int>(sps);
  m.tx.rrc_span_symbols = static_cast<int>(span);
  read_pod(in, m.fiber.length_km);
  read_pod(in, m.fiber.step_km);
  read_pod(in, m.fiber.dispersion_ps_nm_km);
  read_pod(in, m.fiber.gamma_per_w_km);
  read_pod(in, m.fiber.alpha_db_km);
  read_pod(in, m.fiber.wavelength_nm);
  read_pod(in, enabled);
  read_pod(in, m.noise.snr_db);
  read_pod(in, m.noise.seed);
  m.noise.enabled = enabled != 0;
  read_pod(in, m.master_seed);
  read_pod(in, m.block_symbols);
  read_pod(in, m.edge_discard_symbols);
  read_pod(in, m.n_symbols);
  read_pod(in, block_count);
  data.tx_blocks.resize(block_count);
  data.rx_blocks.resize(block_count);
  for (std::uint32_t b = 0; b < block_count; ++b) {
    std::uint64_t samples = 0;
    read_pod(in, samples);
    ArrayXcd tx(static_cast<Eigen::Index>(samples));
    ArrayXcd rx(static_cast<Eigen::Index>(samples));
    for (std::uint64_t i = 0; i < samples; ++i) {
      double re = 0.0, im = 0.0;
      read_pod(in, re);
      read_pod(in, im);
      tx[static_cast<Eigen::Index>(i)] = Complex(re, im);
    }
    for (std::uint64_t i = 0; i < samples; ++i) {
      double re = 0.0, im = 0.0;
      read_pod(in, re);
      read_pod(in, im);
      rx[static_cast<Eigen::Index>(i)] = Complex(re, im);
    }
    data.tx_blocks[b] = std::move(tx);
    data.rx_blocks[b] = std::move(rx);
  }
  m.provenance = read_string(in);
  return data;
}

void write_dataset(const std::string& path, const DatasetFile& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_dataset(out, data);
  if (!out) throw IoError("write failed: " + path);
}

DatasetFile read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_dataset(in);
}

}  // namespace fibergan

// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_DATASET_HPP
#define FIBERGAN_DATASET_HPP

#include <string>
#include <vector>

#include "fibergan/fiber.hpp"
#include "fibergan/sigproc.hpp"

namespace fibergan {

// Everything needed to regenerate the file bit-exactly.
struct DatasetMeta {
  TxConfig tx;
  FiberParams fiber;
  NoiseConfig noise;
  std::uint64_t master_seed = 1;
  std::uint32_t block_symbols = 1024;
  std::uint32_t edge_discard_symbols = 20;
  std::uint64_t n_symbols = 0;
  std::string provenance;  // empty for simulated data; model path for generated data
};

// Paired tx/rx waveform blocks. Bits are not stored: they regenerate from
// the per-block seeds derived from master_seed.
struct DatasetFile {
  DatasetMeta meta;
  std::vector<ArrayXcd> tx_blocks;
  std::vector<ArrayXcd> rx_blocks;

  double sample_rate_hz() const { return meta.tx.sample_rate_hz(); }
  std::size_t block_count() const { return tx_blocks.size(); }
};

// The bit stream that produced block `index`.
BitStream block_bits(const DatasetMeta& meta, std::size_t index);

// Seeded bits -> tx chain -> split-step channel, one independent block at a
// time (blocks propagate in parallel; per-block seeds are counter-derived).
DatasetFile generate_dataset(const TxConfig& tx, const FiberParams& fiber,
                             const NoiseConfig& noise, std::uint64_t n_symbols,
                             std::uint32_t block_symbols, std::uint64_t master_seed,
                             std::uint32_t edge_discard_symbols = 20);

// Same dataset from stored metadata, byte-identical to the original.
DatasetFile regenerate_dataset(const DatasetMeta& meta);

// "FGDS" little-endian container; see dataset.cpp for the field order.
void write_dataset(const std::string& path, const DatasetFile& data);
DatasetFile read_dataset(const std::string& path);
void write_dataset(std::ostream& out, const DatasetFile& data);
DatasetFile read_dataset(std::istream& in);

}  // namespace fibergan

#endif

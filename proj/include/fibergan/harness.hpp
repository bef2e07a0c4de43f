// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_HARNESS_HPP
#define FIBERGAN_HARNESS_HPP

#include <string>
#include <vector>

#include "fibergan/dataset.hpp"
#include "fibergan/rxdsp.hpp"
#include "fibergan/surrogate.hpp"

namespace fibergan {

// One evaluation row; delta_ber is surrogate minus channel by convention.
struct EvalRow {
  double distance_km = 0.0;
  double ber_ssfm = 0.0;
  double ber_surrogate = 0.0;
  double delta_ber = 0.0;
  std::uint64_t err_ssfm = 0;
  std::uint64_t err_surrogate = 0;
  std::uint64_t total_bits = 0;
  double t_ssfm_s = 0.0;
  double t_surrogate_s = 0.0;
};

// Joined window sets over every block's interior symbols.
WindowDataset collect_training_pairs(const DatasetFile& data, const WindowGeometry& geometry);

// Runs the identical receiver chain on both rx sets against the shared tx
// reference; counts errors over the same interior-symbol index set. The
// per-block aligned symbols are exposed for constellation export.
struct PairEvaluation {
  EvalRow row;
  ArrayXcd constellation_ssfm;
  ArrayXcd constellation_surrogate;
};

PairEvaluation evaluate_pair(const DatasetFile& channel_data, const DatasetFile& surrogate_data,
                             const DspConfig& dsp);

// Surrogate channel output for every tx block of a dataset, stored in
// dataset format. The edge discard widens so zero-filled window edges plus
// the receive filter span stay outside every metric.
DatasetFile generate_surrogate_dataset(const CganModel& model, const DatasetFile& input,
                                       std::uint64_t seed, const std::string& provenance);

struct BenchRow {
  double distance_km = 0.0;
  double t_ssfm_s = 0.0;       // median over repeats
  double t_surrogate_s = 0.0;  // model preloaded; deserialization excluded
};

// Median wall time of the split-step solver and of surrogate inference on a
// fixed-size waveform, per distance. Timing runs are strictly sequential on
// one worker.
std::vector<BenchRow> bench_runtime(const std::vector<double>& distances_km,
                                    const TxConfig& tx, const FiberParams& fiber,
                                    const CganModel& model, int repeats);

// CSV "stage,symbol_index,re,im" at 17 significant digits.
void export_constellation(const ArrayXcd& symbols, const std::string& stage_label,
                          const std::string& path);
std::vector<Complex> read_constellation(const std::string& path);

// Fixed-header report CSV; doubles round-trip bit-exactly at 17 digits.
void write_eval_report(const std::string& path, const std::vector<EvalRow>& rows);
std::vector<EvalRow> read_eval_report(const std::string& path);

void write_bench_table(const std::string& path, const std::vector<BenchRow>& rows, int repeats);

}  // namespace fibergan

#endif

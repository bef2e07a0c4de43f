// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line binary via subprocess calls.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "fibergan/dataset.hpp"
#include "fibergan/harness.hpp"
#include "fibergan/surrogate.hpp"

using namespace fibergan;

namespace {
const std::string kCli = FIBERGAN_CLI_PATH;

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("fibergan_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}
}  // namespace

TEST_CASE("cli: usage errors exit nonzero") {
  CHECK(run("simulate --distance-km 1") != 0);  // missing --out
  CHECK(run("definitely-not-a-command") != 0);
  CHECK(run("evaluate --ssfm a --gen b --dsp bogus --report r.csv") != 0);
  CHECK(run("--help") == 0);
}

TEST_CASE("cli: simulate writes the expected dataset") {
  TempDir tmp;
  const std::string out = tmp.file("d.bin");
  REQUIRE(run("simulate --distance-km 1 --symbols 2048 --power-dbm 10 --seed 1 --step-km 0.05 "
              "--out " + out) == 0);
  const DatasetFile data = read_dataset(out);
  CHECK(data.block_count() == 2);
  CHECK(data.meta.fiber.length_km == 1.0);
  CHECK(data.meta.noise.enabled);
  std::uint64_t tx_samples = 0;
  for (const auto& block : data.tx_blocks) tx_samples += block.size();
  CHECK(tx_samples == 2048 * 4);

  // Zero distance with noise off passes the input through unchanged.
  const std::string zero = tmp.file("zero.bin");
  REQUIRE(run("simulate --distance-km 0 --symbols 1024 --seed 2 --no-noise --out " + zero) == 0);
  const DatasetFile z = read_dataset(zero);
  for (std::size_t b = 0; b < z.block_count(); ++b)
    CHECK((z.tx_blocks[b] - z.rx_blocks[b]).abs().maxCoeff() == 0.0);

  // Same seed, same bytes.
  const std::string again = tmp.file("again.bin");
  REQUIRE(run("simulate --distance-km 1 --symbols 2048 --power-dbm 10 --seed 1 --step-km 0.05 "
              "--out " + again) == 0);
  CHECK(slurp(out) == slurp(again));
}

TEST_CASE("cli: config file values are overridden by flags") {
  TempDir tmp;
  const std::string ini = tmp.file("run.ini");
  {
    std::ofstream out(ini);
    out << "[simulate]\n"
           "distance-km=1\n"
           "step-km=0.05\n"
           "symbols=1024\n"
           "power-dbm=7\n"
           "seed=3\n";
  }
  const std::string a = tmp.file("a.bin");
  REQUIRE(run("--config " + ini + " simulate --out " + a) == 0);
  const DatasetFile da = read_dataset(a);
  CHECK(da.meta.fiber.length_km == 1.0);
  CHECK(da.meta.tx.launch_power_dbm == 7.0);

  // A flag on the command line wins over the file value.
  const std::string b = tmp.file("b.bin");
  REQUIRE(run("--config " + ini + " simulate --power-dbm 9 --out " + b) == 0);
  const DatasetFile db = read_dataset(b);
  CHECK(db.meta.fiber.length_km == 1.0);
  CHECK(db.meta.tx.launch_power_dbm == 9.0);
}

TEST_CASE("cli: train, generate, evaluate, bench work end to end") {
  TempDir tmp;
  const std::string data = tmp.file("d.bin");
  REQUIRE(run("simulate --distance-km 1 --symbols 2048 --seed 3 --step-km 0.05 --out " + data) ==
          0);

  const std::string model = tmp.file("m.bin");
  REQUIRE(run("train --model cgan --data " + data + " --epochs 2 --seed 4 --out " + model) == 0);
  const CganModel m = load_model(model);
  CHECK(!m.is_fcnn());

  // Loss trace has one row per epoch plus the header.
  std::ifstream loss(model + ".loss.csv");
  std::string line;
  int rows = 0;
  while (std::getline(loss, line)) ++rows;
  CHECK(rows == 3);

  const std::string fcnn = tmp.file("f.bin");
  REQUIRE(run("train --model fcnn --data " + data + " --epochs 2 --seed 4 --out " + fcnn) == 0);
  CHECK(load_model(fcnn).is_fcnn());

  const std::string gen = tmp.file("g.bin");
  REQUIRE(run("generate --model " + model + " --data " + data + " --seed 5 --out " + gen) == 0);
  const DatasetFile g = read_dataset(gen);
  CHECK(g.block_count() == 2);
  CHECK(g.meta.provenance == model);

  const std::string gen2 = tmp.file("g2.bin");
  REQUIRE(run("generate --model " + model + " --data " + data + " --seed 5 --out " + gen2) == 0);
  CHECK(slurp(gen) == slurp(gen2));
  const std::string gen3 = tmp.file("g3.bin");
  REQUIRE(run("generate --model " + model + " --data " + data + " --seed 6 --out " + gen3) == 0);
  CHECK(slurp(gen) != slurp(gen3));

  const std::string report = tmp.file("report.csv");
  REQUIRE(run("evaluate --ssfm " + data + " --gen " + data + " --dsp cd --report " + report) ==
          0);
  const std::vector<EvalRow> eval_rows = read_eval_report(report);
  REQUIRE(eval_rows.size() == 1);
  CHECK(eval_rows[0].delta_ber == 0.0);  // self comparison

  // Two labeled runs fill the full 3x3 panel grid (shared channel column).
  const std::string gen_f = tmp.file("gf.bin");
  REQUIRE(run("generate --model " + fcnn + " --data " + data + " --seed 5 --out " + gen_f) == 0);
  const std::string cdir = tmp.file("panels");
  REQUIRE(run("evaluate --ssfm " + data + " --gen " + gen + " --dsp dbp --dbp-steps-per-km 20 "
              "--report " + report + " --constellations-dir " + cdir +
              " --gen-label cgan") == 0);
  REQUIRE(run("evaluate --ssfm " + data + " --gen " + gen_f + " --dsp dbp --dbp-steps-per-km 20 "
              "--report " + report + " --constellations-dir " + cdir +
              " --gen-label fcnn") == 0);
  std::size_t panels = 0;
  for (const std::string stage : {"none", "cd_only", "dbp"})
    for (const std::string source : {"ssfm", "cgan", "fcnn"})
      panels += std::filesystem::exists(cdir + "/constellation_" + stage + "_" + source +
                                        ".csv");
  CHECK(panels == 9);

  const std::string bench = tmp.file("bench.csv");
  REQUIRE(run("bench --distances 0.2,0.4 --model " + model + " --repeats 3 --step-km 0.05 "
              "--out " + bench) == 0);
  std::ifstream btab(bench);
  int bench_rows = 0;
  while (std::getline(btab, line))
    if (!line.empty() && line[0] != '#') ++bench_rows;
  CHECK(bench_rows == 3);  // header + 2 distances
}

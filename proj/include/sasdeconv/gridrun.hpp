#pragma once

#include "sasdeconv/datagen.hpp"
#include "sasdeconv/minimize.hpp"
#include "sasdeconv/refine.hpp"

#include <string>
#include <vector>

namespace sasd {

// Phase-transition experiment over a (p0, theta) grid with derived per-trial
// seeds; cells are independent and run in parallel, results are post-sorted
// so the CSV is deterministic.
struct ExperimentConfig {
  std::vector<int> p0_values;
  std::vector<double> theta_values;
  int trials = 10;
  long n = 1L << 16;
  KernelFamily family = KernelFamily::Generic;
  std::string solver = "argd";  // "argd" | "curvilinear"
  bool refine = false;
  std::uint64_t base_seed = 0;
  MinimizeConfig minimize;
  RefineConfig refine_cfg;

  void validate() const;
  static ExperimentConfig from_json_file(const std::string& path);
};

struct CellResult {
  int p0 = 0;
  double theta = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double max_corr = 0.0;
  int iters = 0;
  double runtime_ms = 0.0;  // wall clock; kept out of the deterministic outputs
  double mu_measured = 0.0;
  std::string status = "ok";
};

std::uint64_t trial_seed(std::uint64_t base_seed, int p0, double theta, int trial);

CellResult run_trial(const ExperimentConfig& cfg, int p0, double theta, int trial);

// Runs all (p0, theta, trial) cells; deterministic result order.
std::vector<CellResult> run_grid(const ExperimentConfig& cfg);

// CSV of CellResult rows (schema-versioned header comment). Wall-clock times
// are deliberately excluded so reruns with one base_seed are byte-identical.
void write_grid_csv(const std::vector<CellResult>& rows, const std::string& path);

// Per-cell success rates.
void write_grid_summary(const std::vector<CellResult>& rows, const ExperimentConfig& cfg,
                        const std::string& path);

}  // namespace sasd

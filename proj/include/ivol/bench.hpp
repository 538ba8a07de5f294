#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivol/batch.hpp"

namespace ivol {

struct BenchCell {
  std::size_t size = 0;
  std::string path;  // "batch" or "scalar"
  double mean_ms = 0.0;
  double std_ms = 0.0;
  bool ok = true;
  std::string error;  // set when a size could not run (e.g. allocation failure)
};

struct BenchReport {
  std::vector<BenchCell> cells;
  int repetitions = 0;
  int warmup = 0;
  int workers = 0;
  int depth = 8;
  Precision precision = Precision::Single;
  std::uint64_t seed = 0;

  const BenchCell* find(std::size_t size, const std::string& path) const;
  // scalar mean / batch mean; NaN when either cell is missing or failed.
  double speedup(std::size_t size) const;
};

struct BenchOptions {
  std::vector<std::size_t> sizes{10'000, 100'000, 1'000'000};
  int repetitions = 100;
  int warmup = 3;
  std::uint64_t seed = 20240611;
};

// Times solve_batch and a scalar reference_solve loop on freshly generated
// datasets (generation and any file I/O excluded; per-element precision
// casts included in the timed region). Wall time via a monotonic clock,
// mean and sample standard deviation over `repetitions` after `warmup`
// discarded runs.
BenchReport run_bench(const BenchOptions& opt, const SolverConfig& cfg,
                      const ExecPolicy& policy = {});

std::string to_text(const BenchReport& report);
std::string to_json_string(const BenchReport& report);

}  // namespace ivol

#pragma once

#include <cstddef>
#include <vector>

#include "ivol/solver.hpp"

namespace ivol {

// Structure-of-arrays quote batch: each column contiguous, all length L.
struct QuoteBatch {
  std::vector<double> k;
  std::vector<double> r;
  std::vector<double> tau;
  std::vector<double> c_mkt;
  std::vector<OptionType> option_type;

  std::size_t size() const { return k.size(); }
  void reserve(std::size_t n);
  void push_back(const MarketInputs& m, double c);
  // Throws std::invalid_argument if columns disagree in length or L == 0.
  void validate() const;
};

struct BatchOutcome {
  std::vector<double> sigma_pred;
  std::vector<SolveStatus> status;
  std::vector<double> residual;
  // Row-major (depth+1) x L trace matrix when tracing; row 0 holds the
  // initial sigmas.
  std::vector<double> trace;
  std::size_t trace_rows = 0;

  std::size_t size() const { return sigma_pred.size(); }
  const double* trace_row(std::size_t layer) const { return trace.data() + layer * size(); }
};

// Execution policy for the internal worker pool. Results are bit-identical
// for any workers/chunk combination; these knobs only affect speed.
struct ExecPolicy {
  int workers = 0;          // 0 = hardware concurrency
  std::size_t chunk = 4096; // elements per work unit
};

int resolve_workers(int requested);

BatchOutcome solve_batch(const QuoteBatch& batch, const SolverConfig& cfg,
                         const ExecPolicy& policy = {});

// Convenience wrapper that forces collect_trace on.
BatchOutcome solve_batch_layerwise(const QuoteBatch& batch, SolverConfig cfg,
                                   const ExecPolicy& policy = {});

// Round-to-nearest-even quantization to the target precision's grid (values
// stay stored as doubles; Single->Double is the identity).
double cast_precision(double x, Precision target);
std::vector<double> cast_precision(std::vector<double> xs, Precision target);
QuoteBatch cast_precision(QuoteBatch batch, Precision target);

}  // namespace ivol

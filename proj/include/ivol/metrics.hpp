#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ivol/batch.hpp"

namespace ivol {

struct ErrorReport {
  double mae = 0.0;
  double mse = 0.0;
  double mre = 0.0;
  std::size_t n = 0;
  Precision precision = Precision::Double;  // mode of the solve being scored
  std::vector<double> per_layer_mse;        // optional, depth+1 entries
};

// MAE/MSE/MRE of pred against truth, accumulated in double regardless of the
// solve precision. Throws std::invalid_argument on length mismatch, empty
// input, or a nonpositive truth entry (MRE divides by it).
ErrorReport compute_errors(std::span<const double> pred, std::span<const double> truth);

// Entry n = MSE of trace row n against truth. Throws on shape mismatch.
std::vector<double> per_layer_mse(const BatchOutcome& traced, std::span<const double> truth);

struct RefResult {
  double sigma;
  SolveStatus status;  // Ok or InvalidPrice
  bool converged;      // |delta sigma| <= tol reached within max_iter
  int iterations;
};

// Scalar double-precision Newton iteration from sigma_c with early exit —
// the per-element baseline and accuracy oracle. Calls the generic pricing
// functions once each per iteration, as a straightforward scalar
// implementation would.
RefResult reference_solve(const MarketInputs& m, double c_mkt, double tol = 1e-12,
                          int max_iter = 8, double sigma_floor = 1e-4);

}  // namespace ivol

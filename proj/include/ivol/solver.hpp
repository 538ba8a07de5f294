#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "ivol/bs.hpp"

namespace ivol {

enum class Precision : std::uint8_t { Single, Double };

// Worst event wins; the enum order is the severity order.
enum class SolveStatus : std::uint8_t {
  Ok = 0,
  ClampedSigma = 1,  // an update fell below sigma_floor and was clamped
  FrozenVega = 2,    // vega under vega_floor, element left unchanged that layer
  InvalidPrice = 3,  // c_mkt outside the open no-arbitrage interval
  NonFinite = 4,     // NaN/Inf produced during the pipeline
};

std::string_view to_string(SolveStatus s);
bool status_from_string(std::string_view name, SolveStatus& out);

struct SolverConfig {
  int depth = 8;
  Precision precision = Precision::Single;
  double sigma_floor = 1e-4;  // applied to the initial point and after steps
  double vega_floor = 1e-8;   // freeze threshold; see make()
  bool collect_trace = false;

  // Defaults per precision mode: vega_floor 1e-8 single, 1e-12 double.
  static SolverConfig make(Precision p, int depth = 8);
};

struct SolveOutcome {
  double sigma_pred = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::Ok;
  double residual = std::numeric_limits<double>::quiet_NaN();  // |h(sigma_pred) - c_mkt|
  std::vector<double> trace;  // depth+1 sigmas when collect_trace is on
};

// Initial point sigma_c = sqrt(|2/tau * (ln k + r tau)|), floored at
// cfg.sigma_floor. This is the vomma-zero inflection point of the price;
// Newton from here converges monotonically. Rounded to f32 in single mode.
double initial_sigma(const MarketInputs& m, const SolverConfig& cfg);

struct StepResult {
  double sigma;
  SolveStatus event;  // Ok, FrozenVega, ClampedSigma or NonFinite
};

// One Newton update sigma - (h(sigma) - c_mkt)/h'(sigma), clamped below at
// sigma_floor. In single mode the inputs are quantized to the f32 grid, the
// step is computed in double and the result is rounded back to f32.
StepResult nru_step(double sigma_n, const MarketInputs& m, double c_mkt,
                    const SolverConfig& cfg);

// Fixed-depth solve: exactly cfg.depth steps from initial_sigma. Never
// throws; every pathology is encoded in the status.
SolveOutcome solve_one(const MarketInputs& m, double c_mkt, const SolverConfig& cfg);

// Black-Scholes price used as a synthetic quote (rounded to f32 in single
// mode). Inverse of solve_one up to the mode's accuracy.
double quote_from_sigma(const MarketInputs& m, double sigma_true,
                        Precision p = Precision::Double);

namespace detail {

struct ElementOut {
  double sigma;
  SolveStatus status;
  double residual;
};

// Per-element fixed-depth kernel shared by solve_one and the batch engine
// (same out-of-line code path => bit-identical results everywhere).
// trace_out, when non-null, receives depth+1 values.
ElementOut solve_element_single(float k, float r, float tau, float c, OptionType type,
                                int depth, float sigma_floor, double vega_floor,
                                double* trace_out);
ElementOut solve_element_double(double k, double r, double tau, double c, OptionType type,
                                int depth, double sigma_floor, double vega_floor,
                                double* trace_out);

ElementOut solve_element(const MarketInputs& m, double c_mkt, const SolverConfig& cfg,
                         double* trace_out);

}  // namespace detail

}  // namespace ivol

#include "ivol/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace ivol {

ErrorReport compute_errors(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("compute_errors: length mismatch");
  if (pred.empty()) throw std::invalid_argument("compute_errors: empty input");

  double sum_abs = 0.0, sum_sq = 0.0, sum_rel = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!(truth[i] > 0.0))
      throw std::invalid_argument("compute_errors: nonpositive truth entry at index " +
                                  std::to_string(i));
    const double d = pred[i] - truth[i];
    sum_abs += std::fabs(d);
    sum_sq += d * d;
    sum_rel += std::fabs(d) / truth[i];
  }
  ErrorReport rep;
  rep.n = pred.size();
  const double inv_n = 1.0 / static_cast<double>(rep.n);
  rep.mae = sum_abs * inv_n;
  rep.mse = sum_sq * inv_n;
  rep.mre = sum_rel * inv_n;
  return rep;
}

std::vector<double> per_layer_mse(const BatchOutcome& traced, std::span<const double> truth) {
  const std::size_t L = traced.size();
  if (traced.trace_rows == 0 || traced.trace.size() != traced.trace_rows * L)
    throw std::invalid_argument("per_layer_mse: outcome has no trace");
  if (truth.size() != L) throw std::invalid_argument("per_layer_mse: length mismatch");

  std::vector<double> out(traced.trace_rows);
  for (std::size_t n = 0; n < traced.trace_rows; ++n) {
    const double* row = traced.trace_row(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const double d = row[i] - truth[i];
      sum += d * d;
    }
    out[n] = sum / static_cast<double>(L);
  }
  return out;
}

RefResult reference_solve(const MarketInputs& m, double c_mkt, double tol, int max_iter,
                          double sigma_floor) {
  const PriceBounds b = price_bounds(m);
  if (!b.contains(c_mkt))
    return {std::numeric_limits<double>::quiet_NaN(), SolveStatus::InvalidPrice, false, 0};

  double s = std::sqrt(std::fabs(2.0 / m.tau * (std::log(m.k) + m.r * m.tau)));
  if (s < sigma_floor) s = sigma_floor;

  for (int it = 1; it <= max_iter; ++it) {
    const double h = price(m, s);
    const double v = vega(m, s);
    double next = s - (h - c_mkt) / v;
    if (next < sigma_floor) next = sigma_floor;
    const double moved = std::fabs(next - s);
    s = next;
    if (moved <= tol) return {s, SolveStatus::Ok, true, it};
  }
  return {s, SolveStatus::Ok, false, max_iter};
}

}  // namespace ivol

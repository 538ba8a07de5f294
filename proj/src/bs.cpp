#include "ivol/bs.hpp"

#include <algorithm>
#include <stdexcept>

namespace ivol {

double norm_cdf(double x) {
  // erfc keeps full absolute accuracy in the lower tail where
  // 0.5*(1 + erf(..)) would cancel; saturates cleanly to 0/1.
  return 0.5 * std::erfc(-x * detail::kInvSqrt2);
}

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) * detail::kInvSqrt2Pi;
}

D1D2 d1_d2(const MarketInputs& m, double sigma) {
  const double st = sigma * std::sqrt(m.tau);
  const double d1 = detail::d1_from(std::log(m.k) + m.r * m.tau, st);
  return {d1, d1 - st};
}

double price(const MarketInputs& m, double sigma) {
  const double st = sigma * std::sqrt(m.tau);
  const double d1 = detail::d1_from(std::log(m.k) + m.r * m.tau, st);
  const double inv_k_disc = std::exp(-m.r * m.tau) / m.k;
  return detail::price_from(d1, d1 - st, inv_k_disc, m.type == OptionType::Call);
}

double vega(const MarketInputs& m, double sigma) {
  const double sqrt_tau = std::sqrt(m.tau);
  const double d1 = detail::d1_from(std::log(m.k) + m.r * m.tau, sigma * sqrt_tau);
  return detail::vega_from(d1, sqrt_tau);
}

double vomma(const MarketInputs& m, double sigma) {
  const double sqrt_tau = std::sqrt(m.tau);
  const double st = sigma * sqrt_tau;
  const double d1 = detail::d1_from(std::log(m.k) + m.r * m.tau, st);
  const double d2 = d1 - st;
  return detail::vega_from(d1, sqrt_tau) * d1 * d2 / sigma;
}

PriceBounds price_bounds(const MarketInputs& m) {
  const double inv_k_disc = std::exp(-m.r * m.tau) / m.k;
  if (m.type == OptionType::Call)
    return {std::max(1.0 - inv_k_disc, 0.0), 1.0};
  return {std::max(inv_k_disc - 1.0, 0.0), inv_k_disc};
}

NormalizedQuote normalize_quote(double spot, double strike, double raw_price,
                                double r, double tau, OptionType type) {
  if (!(spot > 0.0))
    throw std::invalid_argument("normalize_quote: spot must be positive");
  if (!(strike > 0.0))
    throw std::invalid_argument("normalize_quote: strike must be positive");
  if (raw_price < 0.0)
    throw std::invalid_argument("normalize_quote: price must be nonnegative");
  return {MarketInputs{spot / strike, r, tau, type}, raw_price / spot};
}

}  // namespace ivol

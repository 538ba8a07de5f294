#pragma once

#include <cmath>
#include <cstdint>

namespace ivol {

enum class OptionType : std::uint8_t { Call, Put };

// One normalized quote: all prices are per unit spot (S = 1), so the input
// space collapses to (k, r, tau) with k = S/K.
struct MarketInputs {
  double k = 1.0;    // moneyness S/K
  double r = 0.0;    // continuously-compounded rate, per year
  double tau = 1.0;  // time to maturity, years
  OptionType type = OptionType::Call;
};

struct D1D2 {
  double d1;
  double d2;  // d2 = d1 - sigma*sqrt(tau)
};

// Open no-arbitrage interval (lower, upper): the sigma->0 and sigma->inf
// price limits. Implied vol exists and is unique iff c_mkt lies strictly
// inside.
struct PriceBounds {
  double lower;
  double upper;
  bool contains(double c) const { return c > lower && c < upper; }
};

double norm_cdf(double x);
double norm_pdf(double x);

namespace detail {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Shared arithmetic for price/vega so every caller (pricing API, solver
// kernel, data generator) produces bit-identical values. `a` is the
// loop-invariant ln(k) + r*tau.
inline double d1_from(double a, double st) { return a / st + 0.5 * st; }

inline double price_from(double d1, double d2, double inv_k_disc, bool is_call) {
  if (is_call)
    return norm_cdf(d1) - inv_k_disc * norm_cdf(d2);
  return inv_k_disc * norm_cdf(-d2) - norm_cdf(-d1);
}

inline double vega_from(double d1, double sqrt_tau) {
  return std::exp(-0.5 * d1 * d1) * kInvSqrt2Pi * sqrt_tau;
}

}  // namespace detail

D1D2 d1_d2(const MarketInputs& m, double sigma);

// Black-Scholes price per unit spot. Call: N(d1) - (1/k)e^{-r tau} N(d2).
double price(const MarketInputs& m, double sigma);

// dPrice/dsigma = phi(d1) * sqrt(tau). Identical for calls and puts; may
// underflow to 0 deep in the tails (callers guard via a vega floor).
double vega(const MarketInputs& m, double sigma);

// d2Price/dsigma2 = vega * d1 * d2 / sigma. Zero exactly at the inflection
// point sigma_c where d1*d2 = 0.
double vomma(const MarketInputs& m, double sigma);

PriceBounds price_bounds(const MarketInputs& m);

struct NormalizedQuote {
  MarketInputs m;
  double c_mkt;  // price per unit spot
};

// Maps a raw quote (spot, strike, price in currency) to the normalized
// convention. Implied vol is invariant under this scaling.
// Throws std::invalid_argument if spot or strike is nonpositive.
NormalizedQuote normalize_quote(double spot, double strike, double raw_price,
                                double r, double tau, OptionType type);

}  // namespace ivol

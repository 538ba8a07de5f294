#include "ivol/solver.hpp"

#include <algorithm>
#include <cmath>

#if defined(__x86_64__) && defined(__linux__)
#define IVOL_HAVE_LIBMVEC 1
#include <immintrin.h>
extern "C" __m128d _ZGVbN2v_erfc(__m128d);  // glibc libmvec, 2-lane double erfc
#endif

namespace ivol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Both normal CDF values a layer needs, evaluated as one packed erfc call
// where the platform provides it (~2.5x the scalar throughput, max abs error
// measured 2.2e-16 — same class as scalar erfc). Lane-independent, so
// per-element results do not depend on how elements are batched.
inline void cdf_pair(double x0, double x1, double& n0, double& n1) {
#ifdef IVOL_HAVE_LIBMVEC
  const __m128d e = _ZGVbN2v_erfc(
      _mm_setr_pd(-x0 * detail::kInvSqrt2, -x1 * detail::kInvSqrt2));
  n0 = 0.5 * _mm_cvtsd_f64(e);
  n1 = 0.5 * _mm_cvtsd_f64(_mm_unpackhi_pd(e, e));
#else
  n0 = norm_cdf(x0);
  n1 = norm_cdf(x1);
#endif
}

// Loop-invariant pieces of one quote, widened to double. In single mode the
// underlying inputs have already been quantized to the f32 grid; every
// transcendental below runs in double on those widened values.
struct Hoisted {
  double lnk;
  double a;  // lnk + r*tau
  double tau;
  double sqrt_tau;
  double inv_k_disc;  // e^{-r tau} / k
  double c;
  bool is_call;
};

template <typename Real>
Hoisted hoist(Real k, Real r, Real tau, Real c, OptionType type) {
  Hoisted h;
  const double kd = k, rd = r, td = tau;
  h.lnk = std::log(kd);
  h.a = h.lnk + rd * td;
  h.tau = td;
  h.sqrt_tau = std::sqrt(td);
  h.inv_k_disc = std::exp(-rd * td) / kd;
  h.c = static_cast<double>(c);
  h.is_call = type == OptionType::Call;
  return h;
}

struct PriceVega {
  double price;
  double vega;
};

inline PriceVega price_vega_at(const Hoisted& h, double s) {
  const double st = s * h.sqrt_tau;
  const double d1 = detail::d1_from(h.a, st);
  const double d2 = d1 - st;
  double n0, n1;
  if (h.is_call) {
    cdf_pair(d1, d2, n0, n1);  // N(d1), N(d2)
    return {n0 - h.inv_k_disc * n1, detail::vega_from(d1, h.sqrt_tau)};
  }
  cdf_pair(-d2, -d1, n0, n1);  // N(-d2), N(-d1)
  return {h.inv_k_disc * n0 - n1, detail::vega_from(d1, h.sqrt_tau)};
}

inline double price_at(const Hoisted& h, double s) { return price_vega_at(h, s).price; }

inline bool inside_bounds(const Hoisted& h) {
  const double lower =
      h.is_call ? std::max(1.0 - h.inv_k_disc, 0.0) : std::max(h.inv_k_disc - 1.0, 0.0);
  const double upper = h.is_call ? 1.0 : h.inv_k_disc;
  return h.c > lower && h.c < upper;
}

// sigma_c = sqrt(|2/tau * (ln k + r tau)|), rounded to the working precision
// and floored.
template <typename Real>
Real initial_from(const Hoisted& h, Real sigma_floor) {
  const double sc = std::sqrt(std::fabs(2.0 / h.tau * h.a));
  Real s = static_cast<Real>(sc);
  return s < sigma_floor ? sigma_floor : s;
}

template <typename Real>
struct LayerOut {
  Real sigma;
  SolveStatus event;
};

// One Newton layer. The entire update is evaluated in double; only the
// resulting sigma is rounded back to Real.
template <typename Real>
inline LayerOut<Real> layer_step(Real s, const Hoisted& h, Real sigma_floor,
                                 double vega_floor) {
  const double sd = s;
  const PriceVega pv = price_vega_at(h, sd);
  const double v = pv.vega;
  if (v < vega_floor) return {s, SolveStatus::FrozenVega};
  const double next = sd - (pv.price - h.c) / v;
  if (!std::isfinite(next))
    return {static_cast<Real>(kNaN), SolveStatus::NonFinite};
  Real sn = static_cast<Real>(next);
  if (sn < sigma_floor) return {sigma_floor, SolveStatus::ClampedSigma};
  return {sn, SolveStatus::Ok};
}

template <typename Real>
detail::ElementOut solve_element_impl(Real k, Real r, Real tau, Real c, OptionType type,
                                      int depth, Real sigma_floor, double vega_floor,
                                      double* trace_out) {
  const Hoisted h = hoist(k, r, tau, c, type);
  if (!inside_bounds(h)) {
    if (trace_out)
      std::fill(trace_out, trace_out + depth + 1, kNaN);
    return {kNaN, SolveStatus::InvalidPrice, kNaN};
  }

  Real s = initial_from(h, sigma_floor);
  if (trace_out) trace_out[0] = s;
  SolveStatus worst = SolveStatus::Ok;
  for (int layer = 0; layer < depth; ++layer) {
    const LayerOut<Real> step = layer_step(s, h, sigma_floor, vega_floor);
    s = step.sigma;
    worst = std::max(worst, step.event);
    if (trace_out) trace_out[layer + 1] = s;
  }

  if (!std::isfinite(static_cast<double>(s)))
    return {kNaN, SolveStatus::NonFinite, kNaN};
  const double resid = std::fabs(price_at(h, s) - h.c);
  return {static_cast<double>(s), worst, static_cast<double>(static_cast<Real>(resid))};
}

float quantize(double x) { return static_cast<float>(x); }

}  // namespace

namespace detail {

ElementOut solve_element_single(float k, float r, float tau, float c, OptionType type,
                                int depth, float sigma_floor, double vega_floor,
                                double* trace_out) {
  return solve_element_impl<float>(k, r, tau, c, type, depth, sigma_floor, vega_floor,
                                   trace_out);
}

ElementOut solve_element_double(double k, double r, double tau, double c, OptionType type,
                                int depth, double sigma_floor, double vega_floor,
                                double* trace_out) {
  return solve_element_impl<double>(k, r, tau, c, type, depth, sigma_floor, vega_floor,
                                    trace_out);
}

ElementOut solve_element(const MarketInputs& m, double c_mkt, const SolverConfig& cfg,
                         double* trace_out) {
  if (cfg.precision == Precision::Single)
    return solve_element_single(quantize(m.k), quantize(m.r), quantize(m.tau),
                                quantize(c_mkt), m.type, cfg.depth,
                                quantize(cfg.sigma_floor), cfg.vega_floor, trace_out);
  return solve_element_double(m.k, m.r, m.tau, c_mkt, m.type, cfg.depth, cfg.sigma_floor,
                              cfg.vega_floor, trace_out);
}

}  // namespace detail

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok: return "Ok";
    case SolveStatus::ClampedSigma: return "ClampedSigma";
    case SolveStatus::FrozenVega: return "FrozenVega";
    case SolveStatus::InvalidPrice: return "InvalidPrice";
    case SolveStatus::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

bool status_from_string(std::string_view name, SolveStatus& out) {
  for (SolveStatus s : {SolveStatus::Ok, SolveStatus::ClampedSigma, SolveStatus::FrozenVega,
                        SolveStatus::InvalidPrice, SolveStatus::NonFinite}) {
    if (name == to_string(s)) {
      out = s;
      return true;
    }
  }
  return false;
}

SolverConfig SolverConfig::make(Precision p, int depth) {
  SolverConfig cfg;
  cfg.depth = depth;
  cfg.precision = p;
  cfg.vega_floor = p == Precision::Single ? 1e-8 : 1e-12;
  return cfg;
}

double initial_sigma(const MarketInputs& m, const SolverConfig& cfg) {
  if (cfg.precision == Precision::Single) {
    const Hoisted h = hoist(quantize(m.k), quantize(m.r), quantize(m.tau), 0.0f, m.type);
    return initial_from(h, quantize(cfg.sigma_floor));
  }
  const Hoisted h = hoist(m.k, m.r, m.tau, 0.0, m.type);
  return initial_from(h, cfg.sigma_floor);
}

StepResult nru_step(double sigma_n, const MarketInputs& m, double c_mkt,
                    const SolverConfig& cfg) {
  if (cfg.precision == Precision::Single) {
    const Hoisted h =
        hoist(quantize(m.k), quantize(m.r), quantize(m.tau), quantize(c_mkt), m.type);
    const LayerOut<float> out =
        layer_step(quantize(sigma_n), h, quantize(cfg.sigma_floor), cfg.vega_floor);
    return {static_cast<double>(out.sigma), out.event};
  }
  const Hoisted h = hoist(m.k, m.r, m.tau, c_mkt, m.type);
  const LayerOut<double> out = layer_step(sigma_n, h, cfg.sigma_floor, cfg.vega_floor);
  return {out.sigma, out.event};
}

SolveOutcome solve_one(const MarketInputs& m, double c_mkt, const SolverConfig& cfg) {
  SolveOutcome out;
  if (cfg.collect_trace) out.trace.resize(cfg.depth + 1);
  const detail::ElementOut e = detail::solve_element(
      m, c_mkt, cfg, cfg.collect_trace ? out.trace.data() : nullptr);
  out.sigma_pred = e.sigma;
  out.status = e.status;
  out.residual = e.residual;
  return out;
}

double quote_from_sigma(const MarketInputs& m, double sigma_true, Precision p) {
  if (p == Precision::Single) {
    const Hoisted h = hoist(quantize(m.k), quantize(m.r), quantize(m.tau), 0.0f, m.type);
    return static_cast<double>(
        static_cast<float>(price_at(h, static_cast<double>(quantize(sigma_true)))));
  }
  return price(m, sigma_true);
}

}  // namespace ivol

#include "ivol/batch.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace ivol {

void QuoteBatch::reserve(std::size_t n) {
  k.reserve(n);
  r.reserve(n);
  tau.reserve(n);
  c_mkt.reserve(n);
  option_type.reserve(n);
}

void QuoteBatch::push_back(const MarketInputs& m, double c) {
  k.push_back(m.k);
  r.push_back(m.r);
  tau.push_back(m.tau);
  c_mkt.push_back(c);
  option_type.push_back(m.type);
}

void QuoteBatch::validate() const {
  const std::size_t n = k.size();
  if (n == 0) throw std::invalid_argument("QuoteBatch: empty batch");
  if (r.size() != n || tau.size() != n || c_mkt.size() != n || option_type.size() != n)
    throw std::invalid_argument("QuoteBatch: column lengths disagree");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Runs fn(begin, end) over [0, n) in chunks on `workers` threads. Chunk
// claiming order is irrelevant to the output: every element is written to
// its own slot by a pure kernel.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, int workers, const Fn& fn) {
  if (chunk == 0) chunk = 1;
  if (workers <= 1 || n <= chunk) {
    fn(std::size_t{0}, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
      if (begin >= n) break;
      fn(begin, std::min(n, begin + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace

BatchOutcome solve_batch(const QuoteBatch& batch, const SolverConfig& cfg,
                         const ExecPolicy& policy) {
  batch.validate();
  const std::size_t L = batch.size();
  const std::size_t rows = cfg.collect_trace ? static_cast<std::size_t>(cfg.depth) + 1 : 0;

  BatchOutcome out;
  out.sigma_pred.resize(L);
  out.status.resize(L);
  out.residual.resize(L);
  if (rows) {
    out.trace.resize(rows * L);
    out.trace_rows = rows;
  }

  const bool single = cfg.precision == Precision::Single;
  const float sigma_floor_f = static_cast<float>(cfg.sigma_floor);

  auto kernel = [&](std::size_t begin, std::size_t end) {
    std::vector<double> local_trace(rows);
    for (std::size_t i = begin; i < end; ++i) {
      double* tr = rows ? local_trace.data() : nullptr;
      detail::ElementOut e;
      if (single) {
        e = detail::solve_element_single(
            static_cast<float>(batch.k[i]), static_cast<float>(batch.r[i]),
            static_cast<float>(batch.tau[i]), static_cast<float>(batch.c_mkt[i]),
            batch.option_type[i], cfg.depth, sigma_floor_f, cfg.vega_floor, tr);
      } else {
        e = detail::solve_element_double(batch.k[i], batch.r[i], batch.tau[i],
                                         batch.c_mkt[i], batch.option_type[i], cfg.depth,
                                         cfg.sigma_floor, cfg.vega_floor, tr);
      }
      out.sigma_pred[i] = e.sigma;
      out.status[i] = e.status;
      out.residual[i] = e.residual;
      for (std::size_t n = 0; n < rows; ++n) out.trace[n * L + i] = local_trace[n];
    }
  };

  parallel_chunks(L, policy.chunk, resolve_workers(policy.workers), kernel);
  return out;
}

BatchOutcome solve_batch_layerwise(const QuoteBatch& batch, SolverConfig cfg,
                                   const ExecPolicy& policy) {
  cfg.collect_trace = true;
  return solve_batch(batch, cfg, policy);
}

double cast_precision(double x, Precision target) {
  return target == Precision::Single ? static_cast<double>(static_cast<float>(x)) : x;
}

std::vector<double> cast_precision(std::vector<double> xs, Precision target) {
  if (target == Precision::Single)
    for (double& x : xs) x = static_cast<double>(static_cast<float>(x));
  return xs;
}

QuoteBatch cast_precision(QuoteBatch batch, Precision target) {
  if (target == Precision::Single) {
    batch.k = cast_precision(std::move(batch.k), target);
    batch.r = cast_precision(std::move(batch.r), target);
    batch.tau = cast_precision(std::move(batch.tau), target);
    batch.c_mkt = cast_precision(std::move(batch.c_mkt), target);
  }
  return batch;
}

}  // namespace ivol

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivol/batch.hpp"

namespace ivol {

// Synthetic test-set recipe: sigma ~ U[0.01, 0.5), tau ~ U[0.01, 2), and
// ln k ~ U[-sigma^2 tau/2 - w*sigma*sqrt(tau), -sigma^2 tau/2 + w*sigma*sqrt(tau))
// with w = 2, coupled per row. Quotes are call prices at the drawn sigma.
// Rows are derived from (seed, row index) via Philox4x32-10, so the same
// seed yields a bit-identical dataset on any platform.
struct GenSpec {
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 0;
  double sigma_min = 0.01, sigma_max = 0.5;
  double tau_min = 0.01, tau_max = 2.0;
  double r = 0.0;
  double lnk_width = 2.0;  // half-width multiplier on sigma*sqrt(tau)

  bool has_default_ranges() const;
};

struct LnkBounds {
  double lo;
  double hi;
};
LnkBounds lnk_bounds(double sigma, double tau, double width = 2.0);

struct Dataset {
  GenSpec spec;
  std::vector<double> sigma_true;
  std::vector<double> tau;
  std::vector<double> lnk;
  std::vector<double> c_mkt;

  std::size_t size() const { return sigma_true.size(); }
};

Dataset generate(const GenSpec& spec);

// k = exp(lnk) per row, constant r from the spec, calls only.
QuoteBatch to_batch(const Dataset& ds);

// CSV layout: a comment line `# seed=<u64> n=<n> r=<r>` (plus range
// key=values when non-default), a header `sigma_true,tau,lnk,c_mkt`, then
// one row per sample at full double precision (%.17g, lossless round trip).
void write_dataset_csv(const std::string& path, const Dataset& ds);
Dataset read_dataset_csv(const std::string& path);

// Binary layout: 32-byte header (8-byte magic "IVOLDS1\0", u64 n, u64 seed,
// f64 r, all little-endian), then the four columns as consecutive f64
// arrays (column-major).
void write_dataset_bin(const std::string& path, const Dataset& ds);
Dataset read_dataset_bin(const std::string& path);

}  // namespace ivol

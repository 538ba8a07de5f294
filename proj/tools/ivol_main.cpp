// ivol — batch implied-volatility tool.
//
// Subcommands:
//   generate   write a synthetic dataset (seeded, bit-reproducible)
//   solve      invert a quote file to implied vols
//   trace      print the per-layer sigma trajectory for one quote
//   bench      time the batch engine against the scalar reference loop
//   verify     run the embedded golden-value checks
//
// Exit codes: 0 success, 1 verification/validation failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivol/bench.hpp"
#include "ivol/datagen.hpp"
#include "ivol/metrics.hpp"
#include "ivol/quotes_io.hpp"

namespace {

using namespace ivol;

Precision parse_precision(const std::string& s) {
  if (s == "single") return Precision::Single;
  if (s == "double") return Precision::Double;
  throw CLI::ValidationError("--precision", "must be 'single' or 'double'");
}

int parse_workers(const std::string& flag_value) {
  std::string v = flag_value;
  if (v.empty()) {
    if (const char* env = std::getenv("IVOL_WORKERS")) v = env;
  }
  if (v.empty() || v == "auto") return 0;
  try {
    const int n = std::stoi(v);
    if (n < 1) throw std::invalid_argument("");
    return n;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--workers", "must be a positive integer or 'auto'");
  }
}

int cmd_generate(std::uint64_t n, std::uint64_t seed, double r, const std::string& out,
                 const std::string& format) {
  GenSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.r = r;
  const Dataset ds = generate(spec);
  if (format == "binary")
    write_dataset_bin(out, ds);
  else
    write_dataset_csv(out, ds);
  std::printf("wrote %llu rows (seed=%llu, r=%g) to %s\n",
              static_cast<unsigned long long>(ds.size()),
              static_cast<unsigned long long>(seed), r, out.c_str());
  return 0;
}

int cmd_solve(const std::string& in, const std::string& out, const SolverConfig& cfg,
              const ExecPolicy& policy, const std::string& format) {
  QuoteFile qf = read_quotes_csv(in);
  const BatchOutcome result = solve_batch(qf.batch, cfg, policy);

  if (format == "json")
    write_solve_json(out, result);
  else
    write_solve_csv(out, result);

  std::size_t ok = 0, invalid = 0, other = 0;
  for (const SolveStatus s : result.status) {
    if (s == SolveStatus::Ok)
      ++ok;
    else if (s == SolveStatus::InvalidPrice || s == SolveStatus::NonFinite)
      ++invalid;
    else
      ++other;
  }
  std::printf("solved %zu quotes (%s input): ok=%zu flagged=%zu invalid=%zu -> %s\n",
              result.size(), qf.detected_format.c_str(), ok, other, invalid, out.c_str());

  if (!qf.sigma_true.empty()) {
    std::vector<double> pred, truth;
    pred.reserve(result.size());
    truth.reserve(result.size());
    for (std::size_t i = 0; i < result.size(); ++i) {
      if (std::isfinite(result.sigma_pred[i])) {
        pred.push_back(result.sigma_pred[i]);
        truth.push_back(qf.sigma_true[i]);
      }
    }
    if (!pred.empty()) {
      const ErrorReport er = compute_errors(pred, truth);
      std::printf("errors vs ground truth (n=%zu): MAE=%.6e MSE=%.6e MRE=%.6e\n", er.n,
                  er.mae, er.mse, er.mre);
    }
  }
  return 0;
}

int cmd_trace(double k, double r, double tau, double sigma, double c_mkt, bool has_sigma,
              bool is_put, SolverConfig cfg) {
  const MarketInputs m{k, r, tau, is_put ? OptionType::Put : OptionType::Call};
  const double c = has_sigma ? quote_from_sigma(m, sigma, cfg.precision) : c_mkt;
  cfg.collect_trace = true;
  const SolveOutcome out = solve_one(m, c, cfg);
  if (out.status == SolveStatus::InvalidPrice) {
    std::fprintf(stderr, "error: c_mkt=%.17g lies outside the no-arbitrage interval\n", c);
    return 1;
  }
  std::printf("# k=%g r=%g tau=%g c_mkt=%.17g precision=%s depth=%d\n", k, r, tau, c,
              cfg.precision == Precision::Single ? "single" : "double", cfg.depth);
  std::printf("layer  sigma\n");
  for (std::size_t n = 0; n < out.trace.size(); ++n)
    std::printf("%5zu  %.14f\n", n, out.trace[n]);
  if (out.status != SolveStatus::Ok)
    std::printf("# status: %s\n", std::string(to_string(out.status)).c_str());
  return 0;
}

int cmd_bench(const std::vector<std::size_t>& sizes, int reps, std::uint64_t seed,
              const SolverConfig& cfg, const ExecPolicy& policy, const std::string& format,
              const std::string& out_path) {
  BenchOptions opt;
  if (!sizes.empty()) opt.sizes = sizes;
  opt.repetitions = reps;
  opt.seed = seed;
  const BenchReport report = run_bench(opt, cfg, policy);
  const std::string text = format == "json" ? to_json_string(report) : to_text(report);
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) {
      std::fprintf(stderr, "error: cannot open %s\n", out_path.c_str());
      return 1;
    }
    std::fputs(text.c_str(), f);
    std::fclose(f);
    std::printf("wrote bench report to %s\n", out_path.c_str());
  }
  return 0;
}

// Golden-value suite: prints one line per check, nonzero exit on failure.
int cmd_verify(const ExecPolicy& policy) {
  int failures = 0;
  auto check = [&](const char* name, double measured, double bound, bool pass) {
    std::printf("%-34s measured=%.6e bound=%.6e %s\n", name, measured, bound,
                pass ? "PASS" : "FAIL");
    if (!pass) ++failures;
  };

  // Known single-precision trajectories for (sigma=0.3, tau=1, r=0).
  static constexpr double kTraceK15[9] = {
      0.90051656961441, 0.37598699331284, 0.30990260839462, 0.30027109384537,
      0.30000036954880, 0.30000007152557, 0.30000016093254, 0.30000001192093,
      0.30000001192093};
  static constexpr double kTraceK13[9] = {
      0.72438144683838, 0.32452529668808, 0.30062055587769, 0.30000048875809,
      0.30000001192093, 0.30000001192093, 0.30000001192093, 0.30000001192093,
      0.30000001192093};
  const SolverConfig single = SolverConfig::make(Precision::Single);
  for (const auto& [kk, golden] :
       {std::pair{1.5, kTraceK15}, std::pair{1.3, kTraceK13}}) {
    const MarketInputs m{kk, 0.0, 1.0, OptionType::Call};
    SolverConfig cfg = single;
    cfg.collect_trace = true;
    const SolveOutcome out = solve_one(m, quote_from_sigma(m, 0.3, Precision::Single), cfg);
    double maxdiff = 0.0;
    for (int i = 0; i <= 8; ++i)
      maxdiff = std::max(maxdiff, std::fabs(out.trace[i] - golden[i]));
    check(kk == 1.5 ? "trace k=1.5 (9 rows)" : "trace k=1.3 (9 rows)", maxdiff, 2e-7,
          maxdiff <= 2e-7);
  }

  // Normal CDF spot value and symmetry.
  {
    const double d = std::fabs(norm_cdf(0.1) - 0.53982783727702898);
    check("norm_cdf(0.1)", d, 1e-15, d <= 1e-15);
    double worst = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.0625)
      worst = std::max(worst, std::fabs(norm_cdf(x) + norm_cdf(-x) - 1.0));
    check("norm_cdf symmetry on [-8,8]", worst, 1e-15, worst <= 1e-15);
  }

  // Put-call parity.
  {
    double worst = 0.0;
    for (const auto& [k, r, tau, sig] :
         {std::tuple{1.0, 0.0, 1.0, 0.2}, std::tuple{1.5, 0.02, 0.7, 0.35},
          std::tuple{0.8, -0.01, 1.6, 0.12}}) {
      const MarketInputs call{k, r, tau, OptionType::Call};
      const MarketInputs put{k, r, tau, OptionType::Put};
      const double lhs = price(call, sig) - price(put, sig);
      const double rhs = 1.0 - std::exp(-r * tau) / k;
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
    check("put-call parity", worst, 1e-15, worst <= 1e-15);
  }

  // Error magnitudes on a fresh dataset, single precision, depth 8.
  {
    GenSpec gs;
    gs.n = 200'000;
    gs.seed = 987654321;
    const Dataset ds = generate(gs);
    const QuoteBatch qb = cast_precision(to_batch(ds), Precision::Single);
    const BatchOutcome out = solve_batch(qb, single, policy);
    const ErrorReport er = compute_errors(out.sigma_pred, ds.sigma_true);
    check("single MAE (200k fresh rows)", er.mae, 1e-6, er.mae <= 1e-6);
    check("single MSE (200k fresh rows)", er.mse, 1e-12, er.mse <= 1e-12);
    check("single MRE (200k fresh rows)", er.mre, 1e-5, er.mre <= 1e-5);
  }

  // Double-precision batch agrees with the scalar reference.
  {
    GenSpec gs;
    gs.n = 10'000;
    gs.seed = 24680;
    const Dataset ds = generate(gs);
    const QuoteBatch qb = to_batch(ds);
    const BatchOutcome out = solve_batch(qb, SolverConfig::make(Precision::Double), policy);
    double sum = 0.0;
    for (std::size_t i = 0; i < qb.size(); ++i) {
      const MarketInputs m{qb.k[i], qb.r[i], qb.tau[i], qb.option_type[i]};
      sum += std::fabs(out.sigma_pred[i] - reference_solve(m, qb.c_mkt[i]).sigma);
    }
    const double mae = sum / static_cast<double>(qb.size());
    check("batch vs scalar reference MAE", mae, 1e-9, mae <= 1e-9);
  }

  std::printf(failures == 0 ? "all checks passed\n" : "%d check(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ivol: batch implied-volatility engine"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  std::uint64_t gen_n = 1'000'000, gen_seed = 0;
  double gen_r = 0.0;
  std::string gen_out, gen_format = "csv";
  gen->add_option("-n,--n", gen_n, "number of rows")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--r", gen_r, "risk-free rate");
  gen->add_option("-o,--output", gen_out, "output file")->required();
  gen->add_option("--format", gen_format, "csv or binary")
      ->check(CLI::IsMember({"csv", "binary"}));

  // shared solver flags
  int depth = 8;
  std::string precision = "single", workers_flag;

  // solve
  auto* solve = app.add_subcommand("solve", "invert a quote file");
  std::string solve_in, solve_out, solve_format = "csv";
  solve->add_option("-i,--input", solve_in, "quote/dataset CSV")->required();
  solve->add_option("-o,--output", solve_out, "results file")->required();
  solve->add_option("--depth", depth, "layer count")->check(CLI::NonNegativeNumber);
  solve->add_option("--precision", precision, "single or double")
      ->check(CLI::IsMember({"single", "double"}));
  solve->add_option("--workers", workers_flag, "worker count or 'auto'");
  solve->add_option("--format", solve_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // trace
  auto* trace = app.add_subcommand("trace", "per-layer trajectory for one quote");
  double tr_k = 1.0, tr_r = 0.0, tr_tau = 1.0, tr_sigma = 0.0, tr_price = 0.0;
  bool tr_put = false;
  trace->add_option("--k", tr_k, "moneyness S/K")->required();
  trace->add_option("--r", tr_r, "risk-free rate");
  trace->add_option("--tau", tr_tau, "time to maturity (years)")->required();
  auto* opt_sigma = trace->add_option("--sigma", tr_sigma, "true vol (price derived)");
  auto* opt_price = trace->add_option("--price", tr_price, "market price per unit spot");
  trace->add_flag("--put", tr_put, "treat the quote as a put");
  trace->add_option("--depth", depth, "layer count")->check(CLI::NonNegativeNumber);
  trace->add_option("--precision", precision, "single or double")
      ->check(CLI::IsMember({"single", "double"}));

  // bench
  auto* bench = app.add_subcommand("bench", "time batch vs scalar reference");
  std::vector<std::size_t> bench_sizes;
  int bench_reps = 100;
  std::uint64_t bench_seed = 20240611;
  std::string bench_format = "text", bench_out;
  bench->add_option("--sizes", bench_sizes, "comma-separated sizes")->delimiter(',');
  bench->add_option("--reps", bench_reps, "repetitions per cell (>= 2)");
  bench->add_option("--seed", bench_seed, "dataset seed");
  bench->add_option("--depth", depth, "layer count")->check(CLI::NonNegativeNumber);
  bench->add_option("--precision", precision, "single or double")
      ->check(CLI::IsMember({"single", "double"}));
  bench->add_option("--workers", workers_flag, "worker count or 'auto'");
  bench->add_option("--format", bench_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  bench->add_option("-o,--output", bench_out, "write report here instead of stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "run embedded golden checks");
  verify->add_option("--workers", workers_flag, "worker count or 'auto'");

  try {
    app.parse(argc, argv);

    const ivol::ExecPolicy policy{parse_workers(workers_flag), 4096};

    if (gen->parsed()) return cmd_generate(gen_n, gen_seed, gen_r, gen_out, gen_format);

    if (solve->parsed()) {
      ivol::SolverConfig cfg = ivol::SolverConfig::make(parse_precision(precision), depth);
      return cmd_solve(solve_in, solve_out, cfg, policy, solve_format);
    }

    if (trace->parsed()) {
      if ((opt_sigma->count() == 0) == (opt_price->count() == 0)) {
        std::fprintf(stderr, "error: trace needs exactly one of --sigma or --price\n");
        return 2;
      }
      ivol::SolverConfig cfg = ivol::SolverConfig::make(parse_precision(precision), depth);
      return cmd_trace(tr_k, tr_r, tr_tau, tr_sigma, tr_price, opt_sigma->count() > 0,
                       tr_put, cfg);
    }

    if (bench->parsed()) {
      if (bench_reps < 2) {
        std::fprintf(stderr, "error: --reps must be >= 2\n");
        return 2;
      }
      ivol::SolverConfig cfg = ivol::SolverConfig::make(parse_precision(precision), depth);
      return cmd_bench(bench_sizes, bench_reps, bench_seed, cfg, policy, bench_format,
                       bench_out);
    }

    if (verify->parsed()) return cmd_verify(policy);

    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

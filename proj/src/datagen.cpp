#include "ivol/datagen.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "ivol/philox.hpp"

namespace ivol {

namespace {

constexpr char kMagic[8] = {'I', 'V', 'O', 'L', 'D', 'S', '1', '\0'};
constexpr std::string_view kHeader = "sigma_true,tau,lnk,c_mkt";

void check_spec(const GenSpec& s) {
  if (s.n < 1) throw std::invalid_argument("GenSpec: n must be >= 1");
  if (!(s.sigma_min < s.sigma_max) || !(s.sigma_min > 0.0))
    throw std::invalid_argument("GenSpec: empty or nonpositive sigma range");
  if (!(s.tau_min < s.tau_max) || !(s.tau_min > 0.0))
    throw std::invalid_argument("GenSpec: empty or nonpositive tau range");
  if (!(s.lnk_width > 0.0)) throw std::invalid_argument("GenSpec: lnk_width must be > 0");
  if (!std::isfinite(s.r)) throw std::invalid_argument("GenSpec: r must be finite");
}

std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

double parse_double(std::string_view text, const std::string& where) {
  double out;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw std::runtime_error("dataset parse error: bad number in " + where + ": '" +
                             std::string(text) + "'");
  return out;
}

}  // namespace

bool GenSpec::has_default_ranges() const {
  return sigma_min == 0.01 && sigma_max == 0.5 && tau_min == 0.01 && tau_max == 2.0 &&
         lnk_width == 2.0;
}

LnkBounds lnk_bounds(double sigma, double tau, double width) {
  const double center = -0.5 * sigma * sigma * tau;
  const double half = width * sigma * std::sqrt(tau);
  return {center - half, center + half};
}

Dataset generate(const GenSpec& spec) {
  check_spec(spec);
  Dataset ds;
  ds.spec = spec;
  ds.sigma_true.resize(spec.n);
  ds.tau.resize(spec.n);
  ds.lnk.resize(spec.n);
  ds.c_mkt.resize(spec.n);

  for (std::uint64_t i = 0; i < spec.n; ++i) {
    const auto a = Philox4x32::row_block(i, 0, spec.seed);
    const auto b = Philox4x32::row_block(i, 1, spec.seed);
    const double u_sigma = Philox4x32::to_unit(Philox4x32::to_u64(a[0], a[1]));
    const double u_tau = Philox4x32::to_unit(Philox4x32::to_u64(a[2], a[3]));
    const double u_lnk = Philox4x32::to_unit(Philox4x32::to_u64(b[0], b[1]));

    const double sigma = spec.sigma_min + u_sigma * (spec.sigma_max - spec.sigma_min);
    const double tau = spec.tau_min + u_tau * (spec.tau_max - spec.tau_min);
    const auto [lo, hi] = lnk_bounds(sigma, tau, spec.lnk_width);
    const double lnk = lo + u_lnk * (hi - lo);

    ds.sigma_true[i] = sigma;
    ds.tau[i] = tau;
    ds.lnk[i] = lnk;
    ds.c_mkt[i] = price({std::exp(lnk), spec.r, tau, OptionType::Call}, sigma);
  }
  return ds;
}

QuoteBatch to_batch(const Dataset& ds) {
  QuoteBatch b;
  b.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i)
    b.push_back({std::exp(ds.lnk[i]), ds.spec.r, ds.tau[i], OptionType::Call}, ds.c_mkt[i]);
  return b;
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream f(path, std::ios::binary);  // binary: no newline translation
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string buf;
  buf.reserve(1 << 20);
  buf += "# seed=" + std::to_string(ds.spec.seed) + " n=" + std::to_string(ds.spec.n) +
         " r=" + format_double(ds.spec.r);
  if (!ds.spec.has_default_ranges()) {
    buf += " sigma_min=" + format_double(ds.spec.sigma_min) +
           " sigma_max=" + format_double(ds.spec.sigma_max) +
           " tau_min=" + format_double(ds.spec.tau_min) +
           " tau_max=" + format_double(ds.spec.tau_max) +
           " lnk_width=" + format_double(ds.spec.lnk_width);
  }
  buf += "\n";
  buf += kHeader;
  buf += "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    buf += format_double(ds.sigma_true[i]);
    buf += ',';
    buf += format_double(ds.tau[i]);
    buf += ',';
    buf += format_double(ds.lnk[i]);
    buf += ',';
    buf += format_double(ds.c_mkt[i]);
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);

  Dataset ds;
  std::string line;
  if (!std::getline(f, line) || line.empty() || line[0] != '#')
    throw std::runtime_error("dataset parse error: missing '# seed=...' comment line");

  // key=value pairs after '#'
  std::istringstream meta(line.substr(1));
  std::string tok;
  bool have_seed = false, have_n = false;
  while (meta >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("dataset parse error: malformed header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "seed") {
      ds.spec.seed = std::stoull(val);
      have_seed = true;
    } else if (key == "n") {
      ds.spec.n = std::stoull(val);
      have_n = true;
    } else if (key == "r") {
      ds.spec.r = parse_double(val, "header r");
    } else if (key == "sigma_min") {
      ds.spec.sigma_min = parse_double(val, "header sigma_min");
    } else if (key == "sigma_max") {
      ds.spec.sigma_max = parse_double(val, "header sigma_max");
    } else if (key == "tau_min") {
      ds.spec.tau_min = parse_double(val, "header tau_min");
    } else if (key == "tau_max") {
      ds.spec.tau_max = parse_double(val, "header tau_max");
    } else if (key == "lnk_width") {
      ds.spec.lnk_width = parse_double(val, "header lnk_width");
    }  // unknown keys ignored
  }
  if (!have_seed || !have_n)
    throw std::runtime_error("dataset parse error: header must carry seed= and n=");

  if (!std::getline(f, line) || line != kHeader)
    throw std::runtime_error("dataset parse error: expected column header '" +
                             std::string(kHeader) + "'");

  ds.sigma_true.reserve(ds.spec.n);
  ds.tau.reserve(ds.spec.n);
  ds.lnk.reserve(ds.spec.n);
  ds.c_mkt.reserve(ds.spec.n);

  static constexpr const char* kColNames[4] = {"sigma_true", "tau", "lnk", "c_mkt"};
  std::size_t lineno = 2;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string_view rest(line);
    double vals[4];
    for (int col = 0; col < 4; ++col) {
      const auto comma = rest.find(',');
      const bool last = col == 3;
      if (last != (comma == std::string_view::npos))
        throw std::runtime_error("dataset parse error: line " + std::to_string(lineno) +
                                 ": expected 4 fields");
      const std::string_view field = last ? rest : rest.substr(0, comma);
      vals[col] = parse_double(field, "line " + std::to_string(lineno) + " column " +
                                          kColNames[col]);
      if (!last) rest.remove_prefix(comma + 1);
    }
    ds.sigma_true.push_back(vals[0]);
    ds.tau.push_back(vals[1]);
    ds.lnk.push_back(vals[2]);
    ds.c_mkt.push_back(vals[3]);
  }
  if (ds.size() != ds.spec.n)
    throw std::runtime_error("dataset parse error: header says n=" +
                             std::to_string(ds.spec.n) + " but file has " +
                             std::to_string(ds.size()) + " rows");
  return ds;
}

void write_dataset_bin(const std::string& path, const Dataset& ds) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  char header[32] = {};
  std::memcpy(header, kMagic, 8);
  const std::uint64_t n = ds.size();
  std::memcpy(header + 8, &n, 8);
  std::memcpy(header + 16, &ds.spec.seed, 8);
  std::memcpy(header + 24, &ds.spec.r, 8);
  f.write(header, 32);
  for (const auto* col : {&ds.sigma_true, &ds.tau, &ds.lnk, &ds.c_mkt})
    f.write(reinterpret_cast<const char*>(col->data()),
            static_cast<std::streamsize>(col->size() * sizeof(double)));
  if (!f) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset_bin(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  char header[32];
  if (!f.read(header, 32)) throw std::runtime_error("dataset parse error: short header");
  if (std::memcmp(header, kMagic, 8) != 0)
    throw std::runtime_error("dataset parse error: bad magic (not a dataset file)");
  Dataset ds;
  std::uint64_t n;
  std::memcpy(&n, header + 8, 8);
  std::memcpy(&ds.spec.seed, header + 16, 8);
  std::memcpy(&ds.spec.r, header + 24, 8);
  ds.spec.n = n;
  static constexpr const char* kColNames[4] = {"sigma_true", "tau", "lnk", "c_mkt"};
  std::vector<double>* cols[4] = {&ds.sigma_true, &ds.tau, &ds.lnk, &ds.c_mkt};
  for (int c = 0; c < 4; ++c) {
    cols[c]->resize(n);
    if (!f.read(reinterpret_cast<char*>(cols[c]->data()),
                static_cast<std::streamsize>(n * sizeof(double))))
      throw std::runtime_error(std::string("dataset parse error: column ") + kColNames[c] +
                               " truncated");
  }
  char extra;
  if (f.read(&extra, 1))
    throw std::runtime_error("dataset parse error: trailing bytes after columns");
  return ds;
}

}  // namespace ivol

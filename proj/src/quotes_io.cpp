#include "ivol/quotes_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ivol {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      out.push_back(line);
      return out;
    }
    out.push_back(line.substr(0, comma));
    line.remove_prefix(comma + 1);
  }
}

double parse_field(std::string_view text, std::size_t lineno, const char* name) {
  if (text == "nan" || text == "NaN")
    return std::numeric_limits<double>::quiet_NaN();
  double out;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw std::runtime_error("quote parse error: line " + std::to_string(lineno) +
                             ", field '" + name + "': bad number '" + std::string(text) +
                             "'");
  return out;
}

OptionType parse_type(std::string_view text, std::size_t lineno) {
  if (text == "call" || text == "Call" || text == "C" || text == "c")
    return OptionType::Call;
  if (text == "put" || text == "Put" || text == "P" || text == "p")
    return OptionType::Put;
  throw std::runtime_error("quote parse error: line " + std::to_string(lineno) +
                           ": unknown option type '" + std::string(text) + "'");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

}  // namespace

QuoteFile read_quotes_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);

  QuoteFile qf;
  std::string line;
  std::size_t lineno = 0;

  // skip comment lines before the header
  std::string header;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    header = line;
    break;
  }
  if (header.empty()) throw std::runtime_error("quote parse error: missing header line");

  enum class Fmt { Dataset, Normalized, Raw } fmt;
  if (header == "sigma_true,tau,lnk,c_mkt") {
    fmt = Fmt::Dataset;
    qf.detected_format = "dataset";
  } else if (header == "k,r,tau,c_mkt" || header == "k,r,tau,c_mkt,type") {
    fmt = Fmt::Normalized;
    qf.detected_format = "normalized";
  } else if (header == "spot,strike,rate,tau,price" ||
             header == "spot,strike,rate,tau,price,type") {
    fmt = Fmt::Raw;
    qf.detected_format = "raw";
  } else {
    throw std::runtime_error("quote parse error: unrecognized header '" + header + "'");
  }

  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    switch (fmt) {
      case Fmt::Dataset: {
        if (fields.size() != 4)
          throw std::runtime_error("quote parse error: line " + std::to_string(lineno) +
                                   ": expected 4 fields");
        const double sigma = parse_field(fields[0], lineno, "sigma_true");
        const double tau = parse_field(fields[1], lineno, "tau");
        const double lnk = parse_field(fields[2], lineno, "lnk");
        const double c = parse_field(fields[3], lineno, "c_mkt");
        qf.sigma_true.push_back(sigma);
        qf.batch.push_back({std::exp(lnk), 0.0, tau, OptionType::Call}, c);
        break;
      }
      case Fmt::Normalized: {
        if (fields.size() != 4 && fields.size() != 5)
          throw std::runtime_error("quote parse error: line " + std::to_string(lineno) +
                                   ": expected 4 or 5 fields");
        const double k = parse_field(fields[0], lineno, "k");
        const double r = parse_field(fields[1], lineno, "r");
        const double tau = parse_field(fields[2], lineno, "tau");
        const double c = parse_field(fields[3], lineno, "c_mkt");
        const OptionType type =
            fields.size() == 5 ? parse_type(fields[4], lineno) : OptionType::Call;
        qf.batch.push_back({k, r, tau, type}, c);
        break;
      }
      case Fmt::Raw: {
        if (fields.size() != 5 && fields.size() != 6)
          throw std::runtime_error("quote parse error: line " + std::to_string(lineno) +
                                   ": expected 5 or 6 fields");
        const double spot = parse_field(fields[0], lineno, "spot");
        const double strike = parse_field(fields[1], lineno, "strike");
        const double rate = parse_field(fields[2], lineno, "rate");
        const double tau = parse_field(fields[3], lineno, "tau");
        const double px = parse_field(fields[4], lineno, "price");
        const OptionType type =
            fields.size() == 6 ? parse_type(fields[5], lineno) : OptionType::Call;
        const NormalizedQuote q = normalize_quote(spot, strike, px, rate, tau, type);
        qf.batch.push_back(q.m, q.c_mkt);
        break;
      }
    }
  }
  if (qf.batch.size() == 0)
    throw std::runtime_error("quote parse error: no data rows in " + path);
  return qf;
}

void write_solve_csv(const std::string& path, const BatchOutcome& out) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string buf = "sigma_pred,status,residual\n";
  for (std::size_t i = 0; i < out.size(); ++i) {
    buf += format_double(out.sigma_pred[i]);
    buf += ',';
    buf += to_string(out.status[i]);
    buf += ',';
    buf += format_double(out.residual[i]);
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_solve_json(const std::string& path, const BatchOutcome& out) {
  nlohmann::json j;
  j["n"] = out.size();
  auto& results = j["results"] = nlohmann::json::array();
  auto num_or_null = [](double x) {
    return std::isnan(x) ? nlohmann::json() : nlohmann::json(x);
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    results.push_back({{"sigma_pred", num_or_null(out.sigma_pred[i])},
                       {"status", std::string(to_string(out.status[i]))},
                       {"residual", num_or_null(out.residual[i])}});
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace ivol

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivol/batch.hpp"

namespace ivol {

// Quote files are CSV with one of three headers, auto-detected:
//   sigma_true,tau,lnk,c_mkt            dataset format (ground truth present)
//   k,r,tau,c_mkt[,type]                normalized quotes
//   spot,strike,rate,tau,price[,type]   raw quotes, normalized on load
// `type` is "call" or "put" (default call). Parse failures throw
// std::runtime_error naming the line and field.
struct QuoteFile {
  QuoteBatch batch;
  std::vector<double> sigma_true;  // empty unless dataset format
  std::string detected_format;     // "dataset", "normalized" or "raw"
};

QuoteFile read_quotes_csv(const std::string& path);

// Output columns `sigma_pred,status,residual`; NaN serialized as `nan`.
void write_solve_csv(const std::string& path, const BatchOutcome& out);

// Same content as JSON: {"n":..,"results":[{"sigma_pred":..|null,
// "status":"..","residual":..|null},..]}; NaN maps to null.
void write_solve_json(const std::string& path, const BatchOutcome& out);

}  // namespace ivol

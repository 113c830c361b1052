#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/graph.hpp"

namespace hiersage {

/// Dense row-major n × d matrix of per-node input features with named columns.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::vector<std::string> columns)
      : rows_(rows), columns_(std::move(columns)), one_hot_(columns_.size(), false),
        values_(rows_ * columns_.size(), 0.0) {
    check_names();
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<std::string>& columns() const noexcept { return columns_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// One-hot (indicator) columns are left untouched by standardization.
  bool is_one_hot(std::size_t c) const { return one_hot_.at(c); }
  void set_one_hot(std::size_t c, bool v = true) { one_hot_.at(c) = v; }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  static FeatureMatrix column(std::string name, std::span<const double> values) {
    FeatureMatrix m(values.size(), {std::move(name)});
    for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
    return m;
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  void check_names() const {
    std::set<std::string> seen;
    for (const auto& c : columns_)
      if (!seen.insert(c).second) throw Error("duplicate feature column '" + c + "'");
  }

  std::size_t rows_ = 0;
  std::vector<std::string> columns_;
  std::vector<bool> one_hot_;
  std::vector<double> values_;
};

/// Horizontal concatenation. With `standardize`, every non-one-hot column is
/// shifted and scaled to zero mean and unit variance computed over
/// `fit_rows` (all rows when empty); zero-variance columns become zeros.
inline FeatureMatrix assemble_features(std::span<const FeatureMatrix> parts, bool standardize,
                                       std::span<const NodeId> fit_rows = {}) {
  if (parts.empty()) throw Error("assemble_features: no feature blocks given");
  const std::size_t n = parts.front().rows();
  std::vector<std::string> names;
  for (const auto& p : parts) {
    if (p.rows() != n) throw Error("assemble_features: row-count mismatch");
    names.insert(names.end(), p.columns().begin(), p.columns().end());
  }
  FeatureMatrix out(n, std::move(names));
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t c = 0; c < p.cols(); ++c) out.set_one_hot(offset + c, p.is_one_hot(c));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < p.cols(); ++c) out(r, offset + c) = p(r, c);
    offset += p.cols();
  }
  if (!standardize) return out;

  std::vector<NodeId> all;
  if (fit_rows.empty()) {
    all.resize(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
    fit_rows = all;
  }
  for (std::size_t c = 0; c < out.cols(); ++c) {
    if (out.is_one_hot(c)) continue;
    double mean = 0.0;
    for (NodeId r : fit_rows) mean += out(r, c);
    mean /= static_cast<double>(fit_rows.size());
    double var = 0.0;
    for (NodeId r : fit_rows) var += (out(r, c) - mean) * (out(r, c) - mean);
    var /= static_cast<double>(fit_rows.size());
    const double sd = std::sqrt(var);
    for (std::size_t r = 0; r < n; ++r) out(r, c) = sd > 1e-12 * (1.0 + std::abs(mean)) ? (out(r, c) - mean) / sd : 0.0;
  }
  return out;
}

inline FeatureMatrix assemble_features(std::initializer_list<FeatureMatrix> parts, bool standardize,
                                       std::span<const NodeId> fit_rows = {}) {
  std::vector<FeatureMatrix> v(parts);
  return assemble_features(std::span<const FeatureMatrix>(v), standardize, fit_rows);
}

/// TSV: header of column names, one `%.10g` row per node. Columns whose name
/// starts with "onehot:" or "comm_" round-trip as one-hot.
inline void write_features_tsv(std::ostream& out, const FeatureMatrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? "\t" : "") << m.columns()[c];
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.10g", m(r, c));
      out << (c ? "\t" : "") << buf;
    }
    out << '\n';
  }
}

inline bool is_one_hot_column_name(const std::string& name) {
  return name.rfind("comm_", 0) == 0 || name.rfind("onehot:", 0) == 0;
}

inline FeatureMatrix read_features_tsv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = detail::split_tabs(line);
    if (header.empty()) {
      header = std::move(f);
      continue;
    }
    if (f.size() != header.size()) throw ParseError("feature row has " + std::to_string(f.size()) + " fields, header has " + std::to_string(header.size()), lineno);
    std::vector<double> row(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      try {
        std::size_t pos = 0;
        row[i] = std::stod(f[i], &pos);
        if (pos != f[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::logic_error&) {
        throw ParseError("bad number '" + f[i] + "'", lineno);
      }
      if (!std::isfinite(row[i])) throw ParseError("non-finite feature value", lineno);
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError("feature file has no header", 0);
  FeatureMatrix m(rows.size(), header);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < header.size(); ++c) m(r, c) = rows[r][c];
  for (std::size_t c = 0; c < header.size(); ++c) m.set_one_hot(c, is_one_hot_column_name(header[c]));
  return m;
}

}  // namespace hiersage

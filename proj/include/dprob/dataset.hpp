// Copyright 2026 The dprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPROB_DATASET_HPP
#define DPROB_DATASET_HPP

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dprob/error.hpp"

namespace dprob {

using Index = Eigen::Index;

struct RescaleBounds {
  double min = 0.0;
  double max = 1.0;
};

/// Covariates mapped to [0,1] by per-column bounds, plus an unscaled response.
///
/// Bounds are recorded once at load time. Row subsets keep the parent's
/// bounds, so train and test rows stay on the same scale.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> names;
  std::vector<RescaleBounds> bounds;
  std::string response = "y";

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }

  Dataset rows(std::span<const Index> idx) const {
    Dataset out;
    out.X.resize(static_cast<Index>(idx.size()), p());
    out.y.resize(static_cast<Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.X.row(static_cast<Index>(r)) = X.row(idx[r]);
      out.y(static_cast<Index>(r)) = y(idx[r]);
    }
    out.names = names;
    out.bounds = bounds;
    out.response = response;
    return out;
  }

  /// Maps raw covariates through the stored bounds. No clamping.
  Eigen::MatrixXd rescale(const Eigen::MatrixXd& raw) const {
    Eigen::MatrixXd out(raw.rows(), raw.cols());
    for (Index j = 0; j < raw.cols(); ++j) {
      const auto& b = bounds.at(static_cast<std::size_t>(j));
      out.col(j) = (raw.col(j).array() - b.min) / (b.max - b.min);
    }
    return out;
  }

  Eigen::MatrixXd unrescale(const Eigen::MatrixXd& scaled) const {
    Eigen::MatrixXd out(scaled.rows(), scaled.cols());
    for (Index j = 0; j < scaled.cols(); ++j) {
      const auto& b = bounds.at(static_cast<std::size_t>(j));
      out.col(j) = scaled.col(j).array() * (b.max - b.min) + b.min;
    }
    return out;
  }
};

namespace detail {

inline void check_shape(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<std::string>& names) {
  if (X.rows() != y.size()) throw InputError("dataset_io", "covariate and response row counts differ");
  if (X.rows() < 3) throw InputError("dataset_io", "need at least 3 observations, got " + std::to_string(X.rows()));
  if (X.cols() < 1) throw InputError("dataset_io", "need at least one covariate");
  if (static_cast<Index>(names.size()) != X.cols())
    throw InputError("dataset_io", "covariate name count does not match column count");
  if (!X.allFinite() || !y.allFinite()) throw InputError("dataset_io", "non-finite entries in data");
}

}  // namespace detail

/// Builds a dataset from raw covariates, rescaling each column by its own min/max.
inline Dataset make_dataset(const Eigen::MatrixXd& raw_X, Eigen::VectorXd y, std::vector<std::string> names,
                            std::string response = "y") {
  detail::check_shape(raw_X, y, names);
  Dataset ds;
  ds.bounds.reserve(static_cast<std::size_t>(raw_X.cols()));
  for (Index j = 0; j < raw_X.cols(); ++j) {
    const double lo = raw_X.col(j).minCoeff();
    const double hi = raw_X.col(j).maxCoeff();
    if (!(hi > lo))
      throw InputError("dataset_io", "covariate '" + names[static_cast<std::size_t>(j)] + "' is constant");
    ds.bounds.push_back({lo, hi});
  }
  ds.names = std::move(names);
  ds.response = std::move(response);
  ds.X = ds.rescale(raw_X);
  ds.y = std::move(y);
  return ds;
}

/// Builds a dataset whose covariates are rescaled with caller-supplied bounds.
inline Dataset make_dataset_with_bounds(const Eigen::MatrixXd& raw_X, Eigen::VectorXd y,
                                        std::vector<std::string> names, std::vector<RescaleBounds> bounds,
                                        std::string response = "y") {
  detail::check_shape(raw_X, y, names);
  if (static_cast<Index>(bounds.size()) != raw_X.cols())
    throw InputError("dataset_io", "bounds count does not match column count");
  for (const auto& b : bounds)
    if (!(b.max > b.min)) throw InputError("dataset_io", "rescale bounds need max > min");
  Dataset ds;
  ds.bounds = std::move(bounds);
  ds.names = std::move(names);
  ds.response = std::move(response);
  ds.X = ds.rescale(raw_X);
  ds.y = std::move(y);
  return ds;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace detail

/// Reads a comma-separated file with a header row.
///
/// Every column other than `response_name` becomes a covariate, in file order.
/// Cells must parse as finite reals with '.' as the decimal separator.
inline Dataset load_csv(const std::string& path, const std::string& response_name) {
  std::ifstream in(path);
  if (!in) throw InputError("dataset_io", "cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw InputError("dataset_io", "'" + path + "' is empty");
  std::vector<std::string> header;
  for (auto cell : detail::split_commas(line)) header.push_back(detail::unquote(cell));

  const auto resp_it = std::find(header.begin(), header.end(), response_name);
  if (resp_it == header.end())
    throw InputError("dataset_io", "response column '" + response_name + "' not found in '" + path + "'");
  const auto resp_col = static_cast<std::size_t>(resp_it - header.begin());

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != resp_col) names.push_back(header[c]);

  std::vector<std::vector<double>> cols(header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != header.size())
      throw InputError("dataset_io", "row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                         " cells, expected " + std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto cell = cells[c];
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw InputError("dataset_io", "unparseable cell '" + std::string(cell) + "' at row " +
                                           std::to_string(line_no) + ", column '" + header[c] + "'");
      cols[c].push_back(v);
    }
  }

  const auto n = static_cast<Index>(cols[resp_col].size());
  Eigen::MatrixXd raw(n, static_cast<Index>(names.size()));
  Eigen::VectorXd y(n);
  Index j = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const Eigen::Map<const Eigen::VectorXd> col(cols[c].data(), n);
    if (c == resp_col)
      y = col;
    else
      raw.col(j++) = col;
  }
  return make_dataset(raw, std::move(y), std::move(names), response_name);
}

struct SplitPlan {
  std::vector<Index> train_indices;
  std::vector<Index> test_indices;
  std::uint64_t seed = 0;
};

/// Uniformly random train/test partition with round(train_fraction * n) training rows.
inline SplitPlan split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InputError("dataset_io", "train fraction must lie in (0, 1)");
  const Index n = ds.n();
  const auto n_train = static_cast<Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < ds.p() + 2)
    throw InputError("dataset_io", "training set of " + std::to_string(n_train) +
                                       " rows is too small for the full model (need " +
                                       std::to_string(ds.p() + 2) + ")");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  SplitPlan plan;
  plan.seed = seed;
  plan.train_indices.assign(perm.begin(), perm.begin() + n_train);
  plan.test_indices.assign(perm.begin() + n_train, perm.end());
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

/// Debug dump: dimensions, names and bounds, no data values.
inline nlohmann::json to_json(const Dataset& ds) {
  nlohmann::json bounds = nlohmann::json::array();
  for (std::size_t j = 0; j < ds.bounds.size(); ++j)
    bounds.push_back({{"name", ds.names[j]}, {"min", ds.bounds[j].min}, {"max", ds.bounds[j].max}});
  return {{"n", ds.n()}, {"p", ds.p()}, {"response", ds.response}, {"covariates", ds.names}, {"bounds", bounds}};
}

}  // namespace dprob

#endif  // DPROB_DATASET_HPP

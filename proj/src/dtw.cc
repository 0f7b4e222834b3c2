// Copyright (c) 2026 The LPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpm/dtw.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "lpm/error.h"

namespace lpm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double SquaredNorm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

double CosineFromParts(double dot, double sq_a, double sq_b) {
  if (sq_a == 0.0 && sq_b == 0.0) return 0.0;
  if (sq_a == 0.0 || sq_b == 0.0) return 1.0;
  return std::max(0.0, 1.0 - dot / std::sqrt(sq_a * sq_b));
}

double Local(std::span<const double> a, std::span<const double> b,
             double sq_a, double sq_b, LocalMetric metric) {
  const std::size_t n = a.size();
  if (metric == LocalMetric::kCosine) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    return CosineFromParts(dot, sq_a, sq_b);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Cumulative cost and the length (cells) of the path achieving it.
struct Cell {
  double cost = kInf;
  std::size_t length = 0;
};

bool Better(const Cell &x, const Cell &y) {
  return x.cost < y.cost || (x.cost == y.cost && x.length < y.length);
}

}  // namespace

double FrameDistance(std::span<const double> a, std::span<const double> b,
                     LocalMetric metric) {
  if (a.size() != b.size()) {
    throw LpmError(ErrorCode::kDimensionMismatch,
                   "frame dims " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
  return Local(a, b, SquaredNorm(a), SquaredNorm(b), metric);
}

double DtwDistance(const FeatureMatrix &a, const FeatureMatrix &b,
                   const DtwConfig &config) {
  if (a.empty() || b.empty()) {
    throw LpmError(ErrorCode::kEmptySequence, "DTW needs non-empty sequences");
  }
  if (a.cols() != b.cols()) {
    throw LpmError(ErrorCode::kDimensionMismatch,
                   "feature dims " + std::to_string(a.cols()) + " vs " +
                       std::to_string(b.cols()));
  }
  if (config.band_radius && *config.band_radius == 0) {
    throw LpmError(ErrorCode::kInvalidArgument, "band radius must be >= 1");
  }
  // Rows iterate over the longer sequence, the rolling buffer spans the
  // shorter one. Path sums are accumulated in path order either way.
  const bool swap = a.rows() < b.rows();
  const FeatureMatrix &rows = swap ? b : a;
  const FeatureMatrix &cols = swap ? a : b;
  const std::size_t n = rows.rows(), m = cols.rows();
  const std::size_t radius = config.band_radius.value_or(
      std::numeric_limits<std::size_t>::max());
  if (n - m > radius) {
    throw LpmError(ErrorCode::kBandTooNarrow,
                   "band radius " + std::to_string(radius) +
                       " < length difference " + std::to_string(n - m));
  }

  std::vector<double> sq_rows(n), sq_cols(m);
  for (std::size_t i = 0; i < n; ++i) sq_rows[i] = SquaredNorm(rows.row(i));
  for (std::size_t j = 0; j < m; ++j) sq_cols[j] = SquaredNorm(cols.row(j));

  std::vector<Cell> prev(m), curr(m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j_lo = i > radius ? i - radius : 0;
    const std::size_t j_hi =
        radius >= m ? m - 1 : std::min(m - 1, i + radius);
    std::fill(curr.begin(), curr.end(), Cell{});
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      Cell best;
      if (i == 0 && j == 0) {
        best = {0.0, 0};
      } else {
        if (i > 0 && Better(prev[j], best)) best = prev[j];
        if (i > 0 && j > 0 && Better(prev[j - 1], best)) best = prev[j - 1];
        if (j > 0 && Better(curr[j - 1], best)) best = curr[j - 1];
        if (best.cost == kInf) continue;
      }
      const double d = Local(rows.row(i), cols.row(j), sq_rows[i], sq_cols[j],
                             config.metric);
      curr[j] = {best.cost + d, best.length + 1};
    }
    std::swap(prev, curr);
  }
  const Cell &end = prev[m - 1];
  if (end.cost == kInf) {
    throw LpmError(ErrorCode::kBandTooNarrow, "band admits no complete path");
  }
  return config.normalize_by_path_length
             ? end.cost / static_cast<double>(end.length)
             : end.cost;
}

std::vector<double> DtwOneToMany(const FeatureMatrix &query,
                                 std::span<const FeatureMatrix> refs,
                                 const DtwConfig &config,
                                 std::size_t max_threads) {
  std::vector<const FeatureMatrix *> ptrs;
  ptrs.reserve(refs.size());
  for (const auto &r : refs) ptrs.push_back(&r);
  return DtwOneToMany(query, std::span<const FeatureMatrix *const>(ptrs),
                      config, max_threads);
}

std::vector<double> DtwOneToMany(const FeatureMatrix &query,
                                 std::span<const FeatureMatrix *const> refs,
                                 const DtwConfig &config,
                                 std::size_t max_threads) {
  if (refs.empty()) {
    throw LpmError(ErrorCode::kEmptySequence, "no reference sequences");
  }
  std::vector<double> out(refs.size());
  std::vector<std::exception_ptr> errors(refs.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      try {
        out[k] = DtwDistance(query, *refs[k], config);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  std::size_t threads =
      max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, refs.size());
  if (threads <= 1) {
    work(0, refs.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (refs.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < refs.size(); begin += chunk) {
      pool.emplace_back(work, begin, std::min(refs.size(), begin + chunk));
    }
  }

  for (std::size_t k = 0; k < refs.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const LpmError &e) {
      throw LpmError(e.code(), "reference " + std::to_string(k) + ": " +
                                   e.message());
    }
  }
  return out;
}

}  // namespace lpm

// convsim/kde.cc

// Copyright 2026  convsim authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "convsim/kde.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace convsim {

double Quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("Quantile: empty sample");
  const double h = p * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

KdeModel KdeFit(std::span<const double> data,
                std::optional<std::pair<double, double>> clamp) {
  if (data.size() < 10)
    throw std::runtime_error("kde_fit: need at least 10 points, got " +
                             std::to_string(data.size()));

  KdeModel model;
  model.transform.lambda = YjFitLambda(data);  // throws on degenerate data
  model.clamp = clamp;
  model.support.reserve(data.size());
  for (double x : data) model.support.push_back(model.transform.Forward(x));

  const double n = static_cast<double>(model.support.size());
  double mean = 0.0;
  for (double z : model.support) mean += z;
  mean /= n;
  double ss = 0.0;
  for (double z : model.support) ss += (z - mean) * (z - mean);
  const double sigma = std::sqrt(ss / (n - 1.0));
  if (!(sigma > 0.0)) throw std::runtime_error("kde_fit: degenerate data");

  std::vector<double> sorted(model.support.begin(), model.support.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = Quantile(sorted, 0.75) - Quantile(sorted, 0.25);
  double spread = sigma;
  if (iqr > 0.0) spread = std::min(sigma, iqr / 1.34);
  model.bandwidth = 0.9 * spread * std::pow(n, -0.2);
  return model;
}

double KdeSample(const KdeModel& model, Rng* rng) {
  auto draw = [&]() {
    const std::size_t i = rng->UniformIndex(model.support.size());
    const double z = rng->Normal(model.support[i], model.bandwidth);
    return model.transform.Inverse(z);
  };
  if (!model.clamp) return draw();
  const auto [lo, hi] = *model.clamp;
  double x = draw();
  for (int attempt = 0; attempt < 100 && (x < lo || x > hi); ++attempt)
    x = draw();
  return std::clamp(x, lo, hi);
}

double KdeDensity(const KdeModel& model, double x) {
  const double z = model.transform.Forward(x);
  const double h = model.bandwidth;
  const double norm =
      1.0 / (h * std::sqrt(2.0 * std::numbers::pi) *
             static_cast<double>(model.support.size()));
  double acc = 0.0;
  for (double zi : model.support) {
    const double d = (z - zi) / h;
    acc += std::exp(-0.5 * d * d);
  }
  return acc * norm * model.transform.Derivative(x);
}

}  // namespace convsim

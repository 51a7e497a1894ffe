// convsim/yeo_johnson.cc

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

#include "convsim/yeo_johnson.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace convsim {

namespace {
constexpr double kLambdaEps = 1e-12;
}

double YjForward(double x, double lambda) {
  if (x >= 0.0) {
    if (std::abs(lambda) < kLambdaEps) return std::log1p(x);
    return std::expm1(lambda * std::log1p(x)) / lambda;
  }
  const double two_ml = 2.0 - lambda;
  if (std::abs(two_ml) < kLambdaEps) return -std::log1p(-x);
  return -std::expm1(two_ml * std::log1p(-x)) / two_ml;
}

double YjInverse(double y, double lambda) {
  if (y >= 0.0) {
    if (std::abs(lambda) < kLambdaEps) return std::expm1(y);
    return std::expm1(std::log1p(lambda * y) / lambda);
  }
  const double two_ml = 2.0 - lambda;
  if (std::abs(two_ml) < kLambdaEps) return -std::expm1(-y);
  return -std::expm1(std::log1p(-two_ml * y) / two_ml);
}

double YjDerivative(double x, double lambda) {
  if (x >= 0.0) return std::pow(x + 1.0, lambda - 1.0);
  return std::pow(1.0 - x, 1.0 - lambda);
}

double YjLogLikelihood(std::span<const double> data, double lambda) {
  const std::size_t n = data.size();
  double mean = 0.0;
  double jac = 0.0;
  for (double x : data) {
    mean += YjForward(x, lambda);
    // ln|d psi/dx| summed over the sample.
    jac += (x >= 0.0 ? 1.0 : -1.0) * std::log1p(std::abs(x));
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : data) {
    const double d = YjForward(x, lambda) - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n);
  const double nn = static_cast<double>(n);
  return -0.5 * nn * (std::log(2.0 * std::numbers::pi) + 1.0) -
         0.5 * nn * std::log(var) + (lambda - 1.0) * jac;
}

double YjFitLambda(std::span<const double> data) {
  if (data.size() < 10)
    throw std::runtime_error("yj_fit_lambda: need at least 10 points, got " +
                             std::to_string(data.size()));
  const double first = data.front();
  bool constant = true;
  for (double x : data) {
    if (x != first) {
      constant = false;
      break;
    }
  }
  if (constant) throw std::runtime_error("yj_fit_lambda: degenerate sample");
  return GoldenSectionMax(
      [&](double lam) { return YjLogLikelihood(data, lam); }, -2.0, 3.0, 1e-4);
}

}  // namespace convsim

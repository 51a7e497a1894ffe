// convsim/yeo_johnson.h

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

#ifndef CONVSIM_YEO_JOHNSON_H_
#define CONVSIM_YEO_JOHNSON_H_

#include <span>

namespace convsim {

// Yeo-Johnson power transform, defined on all reals and monotone increasing
// for every lambda. lambda = 1 is the identity.
//
//   x >= 0: ((x+1)^lambda - 1) / lambda          (ln(x+1) when lambda = 0)
//   x <  0: -(((-x+1)^(2-lambda) - 1) / (2-lambda))
//                                                 (-ln(-x+1) when lambda = 2)
double YjForward(double x, double lambda);
double YjInverse(double y, double lambda);

// dYjForward/dx; strictly positive everywhere.
double YjDerivative(double x, double lambda);

// Gaussian log-likelihood of the transformed sample, Jacobian included.
// The quantity maximized by YjFitLambda.
double YjLogLikelihood(std::span<const double> data, double lambda);

// Maximum-likelihood lambda, golden-section search over [-2, 3] with
// tolerance 1e-4. Requires >= 10 points; throws on constant data
// ("degenerate sample").
double YjFitLambda(std::span<const double> data);

struct YeoJohnson {
  double lambda = 1.0;
  double Forward(double x) const { return YjForward(x, lambda); }
  double Inverse(double y) const { return YjInverse(y, lambda); }
  double Derivative(double x) const { return YjDerivative(x, lambda); }
};

// Maximizes f over [lo, hi] by golden-section search; deterministic.
// Shared by the lambda fit and the copula estimators.
template <typename F>
double GoldenSectionMax(F f, double lo, double hi, double tol,
                        int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace convsim

#endif  // CONVSIM_YEO_JOHNSON_H_

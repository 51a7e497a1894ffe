// convsim/kde.h

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

#ifndef CONVSIM_KDE_H_
#define CONVSIM_KDE_H_

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "convsim/rng.h"
#include "convsim/yeo_johnson.h"

namespace convsim {

// Gaussian-kernel density estimate fitted in Yeo-Johnson space. The support
// points are stored transformed; densities and samples are mapped back to
// the original space through the inverse transform and its Jacobian. The
// optional clamp bounds samples in the original space; it does not affect
// the density, which integrates to 1 over the real line.
struct KdeModel {
  YeoJohnson transform;
  double bandwidth = 0.0;  // in transformed space, > 0
  std::vector<double> support;
  std::optional<std::pair<double, double>> clamp;
};

// Fits lambda by maximum likelihood and sets the bandwidth with Silverman's
// rule h = 0.9 * min(sigma, IQR/1.34) * n^(-1/5) on the transformed sample.
// Requires >= 10 points; throws on zero-variance data.
KdeModel KdeFit(std::span<const double> data,
                std::optional<std::pair<double, double>> clamp = {});

// One draw: uniform support point + Gaussian(0, bandwidth), inverse
// transformed. With a clamp, redraws up to 100 times before clamping.
double KdeSample(const KdeModel& model, Rng* rng);

// Density at x in the original space (Jacobian-corrected).
double KdeDensity(const KdeModel& model, double x);

// Sample quantile with linear interpolation between order statistics.
double Quantile(std::span<const double> sorted, double p);

}  // namespace convsim

#endif  // CONVSIM_KDE_H_

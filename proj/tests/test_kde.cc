// tests/test_kde.cc

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

#include <cmath>
#include <numbers>
#include <vector>

#include <stdexcept>

#include <doctest.h>

#include "convsim/kde.h"
#include "test_util.h"

using namespace convsim;

namespace {

// Simpson quadrature of the density over [lo, hi].
double IntegrateDensity(const KdeModel& model, double lo, double hi,
                        int intervals) {
  const double h = (hi - lo) / intervals;
  double acc = KdeDensity(model, lo) + KdeDensity(model, hi);
  for (int i = 1; i < intervals; ++i)
    acc += KdeDensity(model, lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("kde_density: single support point is a standard normal kernel") {
  KdeModel model;
  model.transform.lambda = 1.0;
  model.bandwidth = 1.0;
  model.support = {0.0};
  CHECK(KdeDensity(model, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi))
            .epsilon(1e-12));
}

TEST_CASE("kde_fit: density integrates to 1 and is nonnegative") {
  Rng rng(23);
  std::vector<double> data(400);
  for (double& x : data) x = 0.4 * rng.Normal() + std::abs(rng.Normal());
  const KdeModel model = KdeFit(data);
  CHECK(IntegrateDensity(model, -50.0, 50.0, 20000) ==
        doctest::Approx(1.0).epsilon(1e-3));
  for (int i = 0; i < 1000; ++i)
    CHECK(KdeDensity(model, rng.Uniform(-30.0, 30.0)) >= 0.0);
}

TEST_CASE("kde sampling variance matches the kernel inflation formula") {
  Rng rng(29);
  std::vector<double> data(5000);
  for (double& x : data) x = rng.Normal();
  const KdeModel model = KdeFit(data);

  std::vector<double> samples(50000);
  for (double& s : samples) s = KdeSample(model, &rng);

  // In transformed space a KDE draw is support point + kernel noise, so the
  // sample variance is support variance + bandwidth^2 exactly.
  std::vector<double> transformed(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    transformed[i] = model.transform.Forward(samples[i]);
  const double support_std = testing::SampleStd(model.support);
  const double expected = std::sqrt(support_std * support_std +
                                    model.bandwidth * model.bandwidth);
  CHECK(testing::SampleStd(transformed) ==
        doctest::Approx(expected).epsilon(0.02));

  // lambda is close to 1 here, so the original-space std shows the same
  // inflation within the looser 3% bound.
  CHECK(testing::SampleStd(samples) ==
        doctest::Approx(expected).epsilon(0.03));
  CHECK(std::abs(testing::SampleMean(samples)) < 0.05);
}

TEST_CASE("kde_fit: bimodal data keeps a valley between the modes") {
  std::vector<double> data;
  for (int i = 0; i < 500; ++i) {
    data.push_back(-1.0);
    data.push_back(1.0);
  }
  const KdeModel model = KdeFit(data);
  const double at_zero = KdeDensity(model, 0.0);
  const double at_neg = KdeDensity(model, -1.0);
  const double at_pos = KdeDensity(model, 1.0);
  CHECK(at_zero < at_neg);
  CHECK(at_zero < at_pos);

  // Mixture-of-Gaussians oracle in transformed space: two kernels at the
  // transformed modes with the fitted bandwidth.
  const double t_neg = model.transform.Forward(-1.0);
  const double t_pos = model.transform.Forward(1.0);
  auto mixture = [&](double x) {
    const double z = model.transform.Forward(x);
    const double h = model.bandwidth;
    auto kernel = [&](double c) {
      const double d = (z - c) / h;
      return std::exp(-0.5 * d * d) / (h * std::sqrt(2.0 * std::numbers::pi));
    };
    return 0.5 * (kernel(t_neg) + kernel(t_pos)) *
           model.transform.Derivative(x);
  };
  for (double x : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5})
    CHECK(KdeDensity(model, x) == doctest::Approx(mixture(x)).epsilon(1e-9));
}

TEST_CASE("kde_fit: fewer than 10 points is a precondition error") {
  const std::vector<double> data = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK_THROWS_AS(KdeFit(data), std::runtime_error);
}

TEST_CASE("kde_fit: constant data is degenerate") {
  const std::vector<double> data(100, 2.5);
  CHECK_THROWS_AS(KdeFit(data), std::runtime_error);
}

TEST_CASE("kde_sample: near-delta kernel returns the support point") {
  KdeModel model;
  model.transform.lambda = 1.0;
  model.bandwidth = 1e-12;
  model.support = {0.7};
  Rng rng(31);
  for (int i = 0; i < 100; ++i)
    CHECK(KdeSample(model, &rng) == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("kde_sample: clamp keeps samples in range") {
  Rng rng(37);
  std::vector<double> data(200);
  for (double& x : data) x = rng.Normal();
  const KdeModel model = KdeFit(data, {{0.0, 10.0}});
  for (int i = 0; i < 5000; ++i) {
    const double s = KdeSample(model, &rng);
    CHECK(s >= 0.0);
    CHECK(s <= 10.0);
  }
}

TEST_CASE("kde_sample: identical seeds give identical sequences") {
  Rng rng(41);
  std::vector<double> data(200);
  for (double& x : data) x = rng.Normal();
  const KdeModel model = KdeFit(data);
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i)
    CHECK(KdeSample(model, &a) == KdeSample(model, &b));
}

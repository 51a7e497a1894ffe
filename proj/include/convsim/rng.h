// convsim/rng.h

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

#ifndef CONVSIM_RNG_H_
#define CONVSIM_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace convsim {

// Seedable random stream on top of std::mt19937_64. All sampling primitives
// are implemented here (not via std::*_distribution, whose output is
// implementation-defined), so a given seed reproduces the same sequence on
// every platform. Child streams are derived from the parent seed and a
// stream index, independent of draw order, so per-conversation generation
// can run on any number of workers.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();

  // Uniform double in [0, 1) with 53-bit resolution.
  double Uniform01();

  // Uniform double in [lo, hi).
  double Uniform(double lo, double hi);

  // Uniform integer in [0, n). Rejection-sampled, unbiased. n must be > 0.
  std::size_t UniformIndex(std::size_t n);

  // Gaussian draw via Box-Muller (one value per two uniforms).
  double Normal(double mean = 0.0, double stddev = 1.0);

  // Independent stream for the given index; depends only on (seed, stream).
  Rng Child(uint64_t stream) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// k distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k,
                                                  Rng* rng);

}  // namespace convsim

#endif  // CONVSIM_RNG_H_

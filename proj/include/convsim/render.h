// convsim/render.h

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

#ifndef CONVSIM_RENDER_H_
#define CONVSIM_RENDER_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "convsim/audio.h"
#include "convsim/manifest.h"
#include "convsim/rng.h"
#include "convsim/simulate.h"
#include "convsim/timeline.h"

namespace convsim {

// Full linear convolution, output length n + m - 1.
std::vector<double> ConvolveDirect(std::span<const double> a,
                                   std::span<const double> b);
// FFT route; must agree with ConvolveDirect within 1e-9.
std::vector<double> ConvolveFft(std::span<const double> a,
                                std::span<const double> b);

// Applies a room impulse response. Picks direct vs FFT by problem size.
// Peak-normalizes only when the result would clip; the applied gain (1.0
// when untouched) is written to *gain_out when given.
AudioBuffer ConvolveRir(const AudioBuffer& utterance, const AudioBuffer& rir,
                        double* gain_out = nullptr);

struct MixOutput {
  AudioBuffer audio;
  double gain = 1.0;  // 1/max(1, global peak)
};

// Places rendered utterance n at round(start(n) * fs) samples and sums
// overlapping regions. `rendered` runs parallel to timeline.segments.
MixOutput MixTimeline(const Timeline& timeline,
                      const std::vector<AudioBuffer>& rendered);

struct NoiseOutput {
  AudioBuffer audio;
  double noise_gain = 0.0;
  std::size_t noise_offset = 0;  // circular offset into the noise source
};

// Adds noise scaled so 10*log10(P_signal/P_noise) = snr_db over the signal
// extent. Short noise is tiled at a uniformly chosen circular offset; long
// noise contributes a uniformly placed window.
NoiseOutput AddNoise(const AudioBuffer& signal, const AudioBuffer& noise,
                     double snr_db, Rng* rng);

struct RenderOutput {
  AudioBuffer audio;
  // Dry-utterance extents at their sample-quantized offsets.
  Timeline ground_truth;
  // Applied RIR ids, noise id, SNR, normalization gains.
  nlohmann::json sidecar;
};

// Renders one simulated conversation: RIR per speaker (one room, distinct
// positions), overlap-add mix, background noise at a sampled SNR. Fills
// result->speaker_positions as a side effect of planning.
RenderOutput RenderConversation(SimResult* result, const UtterancePool& pool,
                                const RirCatalog& rirs,
                                const NoiseCatalog& noises, Rng* rng);

}  // namespace convsim

#endif  // CONVSIM_RENDER_H_

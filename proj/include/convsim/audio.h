// convsim/audio.h

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

#ifndef CONVSIM_AUDIO_H_
#define CONVSIM_AUDIO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace convsim {

// Mono audio in [-1, 1] doubles. Interchange format is 16-bit PCM WAV.
struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 0.0;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

struct WavInfo {
  uint32_t sample_rate = 0;
  uint64_t n_samples = 0;
};

// Header-only probe (sample rate + length); rejects non-PCM16 and
// non-mono files.
WavInfo ReadWavInfo(const std::string& path);

AudioBuffer ReadWav(const std::string& path);

// Little-endian RIFF, PCM16 mono. Round-trip error is at most 1/32768 per
// sample for inputs in [-1, 1]; values outside are clipped.
void WriteWav(const AudioBuffer& buffer, const std::string& path);

}  // namespace convsim

#endif  // CONVSIM_AUDIO_H_

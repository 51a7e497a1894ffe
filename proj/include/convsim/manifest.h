// convsim/manifest.h

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

#ifndef CONVSIM_MANIFEST_H_
#define CONVSIM_MANIFEST_H_

#include <map>
#include <string>
#include <vector>

namespace convsim {

struct UtteranceEntry {
  std::string ref;      // manifest-relative identifier, stable across hosts
  double duration = 0;  // seconds, from the audio header
  std::string locator;  // resolved path for loading audio; "" for in-memory
};

// Single-speaker utterance catalog. Every speaker has at least one
// utterance; all referenced audio shares one sample rate.
struct UtterancePool {
  std::map<std::string, std::vector<UtteranceEntry>> speakers;
  double sample_rate = 0.0;
};

struct RirEntry {
  std::string position_id;
  std::string locator;
};

// room_id -> impulse responses at distinct positions.
struct RirCatalog {
  std::map<std::string, std::vector<RirEntry>> rooms;
  double sample_rate = 0.0;
};

struct NoiseCatalog {
  std::vector<std::pair<std::string, std::string>> noises;  // (ref, locator)
  std::vector<double> snr_choices;                          // dB
  double sample_rate = 0.0;
};

// Manifest: JSON object mapping speaker_id -> list of WAV paths (relative
// paths resolve against the manifest's directory). Durations come from the
// audio headers. Errors: missing file, sample-rate mismatch, speaker with
// zero utterances.
UtterancePool LoadPool(const std::string& manifest_path);

// Manifest: JSON object room_id -> { position_id -> wav path }. Every room
// must offer at least min_positions positions.
RirCatalog LoadRirCatalog(const std::string& manifest_path,
                          int min_positions = 2);

// Manifest: {"noises": [wav paths], "snr_db": [values]}.
NoiseCatalog LoadNoiseCatalog(const std::string& manifest_path);

}  // namespace convsim

#endif  // CONVSIM_MANIFEST_H_

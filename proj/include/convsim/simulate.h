// convsim/simulate.h

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

#ifndef CONVSIM_SIMULATE_H_
#define CONVSIM_SIMULATE_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "convsim/manifest.h"
#include "convsim/rng.h"
#include "convsim/timeline.h"
#include "convsim/timing_model.h"

namespace convsim {

enum class Generator { kSpeakerAware, kBaseline };

struct SimConfig {
  int n_speakers = 2;       // speakers per conversation
  int n_utterances = 10;    // turns per conversation
  int n_conversations = 1;
  uint64_t seed = 0;
  std::pair<double, double> same_clamp{0.0, 10.0};
  std::pair<double, double> cross_clamp{-5.0, 10.0};
  Generator generator = Generator::kSpeakerAware;
  // Speaker-aware utterance choice is uniform without replacement by
  // default; set to true to consume each speaker's pool in order (the
  // baseline always does).
  bool ordered_utterances = false;
};

struct TurnLogEntry {
  std::string speaker;
  std::string utterance_ref;
  double delta = 0.0;          // post-clamp gap before this turn; 0 for n=1
  std::string transition;      // "initial" | "same" | "cross"
  std::optional<double> base_mean;  // the speaker's base timing value used
};

struct SimResult {
  Timeline timeline;
  std::vector<TurnLogEntry> turns;
  // speaker -> (room_id, position_id), filled by render planning.
  std::map<std::string, std::pair<std::string, std::string>> speaker_positions;
};

// Generates conversation `index` of the configured batch. Deterministic in
// (model, pool ordering, cfg, index): each conversation runs on its own
// child random stream, so batches parallelize without changing output.
SimResult SimulateConversation(const TimingModel& model,
                               const UtterancePool& pool, const SimConfig& cfg,
                               int index);

// All cfg.n_conversations conversations, in index order.
std::vector<SimResult> Simulate(const TimingModel& model,
                                const UtterancePool& pool,
                                const SimConfig& cfg);

// Expands the {self, other} template over a concrete speaker set: diagonal
// keeps the turn with P(self), the remaining mass splits uniformly.
TransitionMatrix ExpandTurnMatrix(const TransitionMatrix& turn_template,
                                  const std::vector<std::string>& speakers);

// One room with enough positions, chosen uniformly; distinct positions
// sampled without replacement, one per speaker.
std::map<std::string, std::pair<std::string, std::string>>
PlanSpeakerPositions(const RirCatalog& catalog,
                     const std::vector<std::string>& speakers, Rng* rng);

// per_turn_log document for one conversation.
nlohmann::json TurnLogToJson(const SimResult& result);

}  // namespace convsim

#endif  // CONVSIM_SIMULATE_H_

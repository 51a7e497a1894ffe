// convsim/simulate.cc

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

#include "convsim/simulate.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace convsim {

namespace {

void CheckConfig(const TimingModel& model, const UtterancePool& pool,
                 const SimConfig& cfg) {
  if (cfg.n_speakers < 2)
    throw std::invalid_argument("simulate: n_speakers must be >= 2");
  if (cfg.n_utterances < 2)
    throw std::invalid_argument("simulate: n_utterances must be >= 2");
  if (cfg.n_conversations < 1)
    throw std::invalid_argument("simulate: n_conversations must be >= 1");
  if (static_cast<std::size_t>(cfg.n_speakers) > pool.speakers.size())
    throw std::runtime_error(
        "simulate: n_speakers (" + std::to_string(cfg.n_speakers) +
        ") exceeds pool size (" + std::to_string(pool.speakers.size()) + ")");
  const auto problems = model.turn_template.Check();
  if (!problems.empty())
    throw std::runtime_error("simulate: bad turn template: " +
                             problems.front());
}

// Per-speaker utterance queue with the two selection policies.
class UtteranceQueue {
 public:
  UtteranceQueue(const std::vector<UtteranceEntry>* entries, bool ordered)
      : entries_(entries), ordered_(ordered) {
    remaining_.resize(entries->size());
    for (std::size_t i = 0; i < remaining_.size(); ++i) remaining_[i] = i;
  }

  bool Empty() const { return remaining_.empty(); }

  const UtteranceEntry& Take(Rng* rng) {
    if (remaining_.empty())
      throw std::runtime_error("utterance pool exhausted");
    std::size_t slot = 0;
    if (!ordered_) slot = rng->UniformIndex(remaining_.size());
    const std::size_t idx = remaining_[slot];
    remaining_.erase(remaining_.begin() + static_cast<std::ptrdiff_t>(slot));
    return (*entries_)[idx];
  }

 private:
  const std::vector<UtteranceEntry>* entries_;
  bool ordered_;
  std::vector<std::size_t> remaining_;
};

std::size_t SampleRow(const std::vector<double>& row, Rng* rng) {
  const double u = rng->Uniform01();
  double cum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    cum += row[j];
    if (u < cum) return j;
  }
  return row.size() - 1;
}

struct PlacedTurn {
  std::string speaker;
  const UtteranceEntry* utterance;
  double delta;
  std::string transition;
  std::optional<double> base_mean;
};

// Shared placement: applies the class clamp, the physical overlap bound
// |delta| <= min(prev duration, current duration), the start >= 0 floor, and
// keeps a speaker clear of their own previous segment. Returns the start
// time; flooring at prev_start keeps segments sorted even when the overlap
// bound lands exactly on the previous start (rounding could otherwise slip
// one ulp below it).
double PlaceTurn(double delta, double prev_start, double prev_end,
                 double prev_duration, double duration, double self_last_end,
                 const std::pair<double, double>* clamp) {
  if (clamp) delta = std::clamp(delta, clamp->first, clamp->second);
  if (delta < 0.0)
    delta = std::max(delta, -std::min(prev_duration, duration));
  double start = prev_end + delta;
  start = std::max(start, 0.0);
  start = std::max(start, self_last_end);
  start = std::max(start, prev_start);
  return start;
}

SimResult BuildResult(const std::string& conversation_id,
                      const std::vector<PlacedTurn>& turns,
                      const std::vector<double>& starts) {
  SimResult result;
  result.timeline.conversation_id = conversation_id;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    Segment seg;
    seg.speaker_id = turns[i].speaker;
    seg.start = starts[i];
    seg.duration = turns[i].utterance->duration;
    seg.utterance_ref = turns[i].utterance->ref;
    result.timeline.segments.push_back(std::move(seg));

    TurnLogEntry entry;
    entry.speaker = turns[i].speaker;
    entry.utterance_ref = turns[i].utterance->ref;
    entry.delta = turns[i].delta;
    entry.transition = turns[i].transition;
    entry.base_mean = turns[i].base_mean;
    result.turns.push_back(std::move(entry));
  }
  return result;
}

SimResult RunSpeakerAware(const TimingModel& model, const UtterancePool& pool,
                          const SimConfig& cfg, int index, Rng* rng) {
  std::vector<std::string> all_speakers;
  all_speakers.reserve(pool.speakers.size());
  for (const auto& [speaker, entries] : pool.speakers)
    all_speakers.push_back(speaker);

  std::vector<std::string> speakers;
  for (std::size_t i :
       SampleWithoutReplacement(all_speakers.size(),
                                static_cast<std::size_t>(cfg.n_speakers), rng))
    speakers.push_back(all_speakers[i]);

  const TransitionMatrix turn_matrix =
      ExpandTurnMatrix(model.turn_template, speakers);

  std::map<std::string, UtteranceQueue> queues;
  for (const auto& s : speakers)
    queues.emplace(s, UtteranceQueue(&pool.speakers.at(s),
                                     cfg.ordered_utterances));

  // Base timing values, drawn once per (conversation, speaker, class).
  std::map<std::string, double> mu_same, mu_diff;
  std::map<std::string, double> self_last_end;

  std::vector<PlacedTurn> turns;
  std::vector<double> starts;
  double prev_end = 0.0, prev_duration = 0.0;
  std::size_t current = rng->UniformIndex(speakers.size());

  const std::string conversation_id = "sim_" + std::to_string(index);
  for (int n = 0; n < cfg.n_utterances; ++n) {
    if (n > 0) current = SampleRow(turn_matrix.probs[current], rng);
    const std::string& speaker = speakers[current];
    auto& queue = queues.at(speaker);
    if (queue.Empty())
      throw std::runtime_error("simulate: speaker '" + speaker +
                               "' exhausted utterance pool in " +
                               conversation_id);
    const UtteranceEntry& utterance = queue.Take(rng);

    PlacedTurn turn;
    turn.speaker = speaker;
    turn.utterance = &utterance;
    double start = 0.0;
    if (n == 0) {
      turn.delta = 0.0;
      turn.transition = "initial";
    } else {
      const bool same = speakers[current] == turns.back().speaker;
      double mu, raw_delta;
      if (same) {
        auto it = mu_same.find(speaker);
        if (it == mu_same.end()) {
          mu = KdeSample(model.mean_same, rng);
          mu_same[speaker] = mu;
          raw_delta = mu;  // first same-speaker gap is the base value itself
        } else {
          mu = it->second;
          raw_delta = mu + KdeSample(model.dev_same, rng);
        }
        turn.transition = "same";
      } else {
        auto it = mu_diff.find(speaker);
        if (it == mu_diff.end()) {
          mu = KdeSample(model.mean_diff, rng);
          mu_diff[speaker] = mu;
          raw_delta = mu;
        } else {
          mu = it->second;
          raw_delta = mu + KdeSample(model.dev_diff, rng);
        }
        turn.transition = "cross";
      }
      turn.base_mean = mu;
      const auto& clamp = same ? cfg.same_clamp : cfg.cross_clamp;
      auto self_it = self_last_end.find(speaker);
      const double self_end =
          self_it == self_last_end.end() ? 0.0 : self_it->second;
      start = PlaceTurn(raw_delta, starts.back(), prev_end, prev_duration,
                        utterance.duration, self_end, &clamp);
      turn.delta = start - prev_end;
    }
    starts.push_back(start);
    prev_end = start + utterance.duration;
    prev_duration = utterance.duration;
    self_last_end[speaker] = prev_end;
    turns.push_back(std::move(turn));
  }
  return BuildResult(conversation_id, turns, starts);
}

SimResult RunBaseline(const TimingModel& model, const UtterancePool& pool,
                      const SimConfig& cfg, int index, Rng* rng) {
  std::vector<std::string> all_speakers;
  for (const auto& [speaker, entries] : pool.speakers)
    all_speakers.push_back(speaker);
  std::vector<std::string> speakers;
  for (std::size_t i :
       SampleWithoutReplacement(all_speakers.size(),
                                static_cast<std::size_t>(cfg.n_speakers), rng))
    speakers.push_back(all_speakers[i]);

  // Baseline consumes each speaker's utterances in pool order.
  std::map<std::string, UtteranceQueue> queues;
  for (const auto& s : speakers)
    queues.emplace(s, UtteranceQueue(&pool.speakers.at(s), true));

  std::map<std::string, double> self_last_end;
  std::vector<PlacedTurn> turns;
  std::vector<double> starts;
  double prev_end = 0.0, prev_duration = 0.0;

  const std::string conversation_id = "sim_" + std::to_string(index);
  for (int n = 0; n < cfg.n_utterances; ++n) {
    // No Markov structure: each turn's speaker is an independent uniform
    // choice among the conversation's speakers.
    const std::string& speaker = speakers[rng->UniformIndex(speakers.size())];
    auto& queue = queues.at(speaker);
    if (queue.Empty())
      throw std::runtime_error("simulate: speaker '" + speaker +
                               "' exhausted utterance pool in " +
                               conversation_id);
    const UtteranceEntry& utterance = queue.Take(rng);

    PlacedTurn turn;
    turn.speaker = speaker;
    turn.utterance = &utterance;
    double start = 0.0;
    if (n == 0) {
      turn.delta = 0.0;
      turn.transition = "initial";
    } else {
      const bool same = speaker == turns.back().speaker;
      double raw_delta;
      if (same) {
        raw_delta = model.baseline.hist_same.Sample(rng);
        turn.transition = "same";
      } else {
        if (rng->Uniform01() < model.baseline.p_pause)
          raw_delta = model.baseline.hist_diff_pause.Sample(rng);
        else
          raw_delta = -model.baseline.hist_overlap.Sample(rng);
        turn.transition = "cross";
      }
      auto self_it = self_last_end.find(speaker);
      const double self_end =
          self_it == self_last_end.end() ? 0.0 : self_it->second;
      start = PlaceTurn(raw_delta, starts.back(), prev_end, prev_duration,
                        utterance.duration, self_end, nullptr);
      turn.delta = start - prev_end;
    }
    starts.push_back(start);
    prev_end = start + utterance.duration;
    prev_duration = utterance.duration;
    self_last_end[speaker] = prev_end;
    turns.push_back(std::move(turn));
  }
  return BuildResult(conversation_id, turns, starts);
}

}  // namespace

TransitionMatrix ExpandTurnMatrix(const TransitionMatrix& turn_template,
                                  const std::vector<std::string>& speakers) {
  const double p_self = turn_template.probs.at(0).at(0);
  const auto n = speakers.size();
  TransitionMatrix m;
  m.states = speakers;
  m.probs.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.probs[i][j] = i == j ? p_self
                             : (1.0 - p_self) / static_cast<double>(n - 1);
    }
  }
  return m;
}

SimResult SimulateConversation(const TimingModel& model,
                               const UtterancePool& pool, const SimConfig& cfg,
                               int index) {
  CheckConfig(model, pool, cfg);
  Rng rng = Rng(cfg.seed).Child(static_cast<uint64_t>(index));
  if (cfg.generator == Generator::kBaseline)
    return RunBaseline(model, pool, cfg, index, &rng);
  return RunSpeakerAware(model, pool, cfg, index, &rng);
}

std::vector<SimResult> Simulate(const TimingModel& model,
                                const UtterancePool& pool,
                                const SimConfig& cfg) {
  std::vector<SimResult> results;
  results.reserve(static_cast<std::size_t>(cfg.n_conversations));
  for (int i = 0; i < cfg.n_conversations; ++i)
    results.push_back(SimulateConversation(model, pool, cfg, i));
  return results;
}

std::map<std::string, std::pair<std::string, std::string>>
PlanSpeakerPositions(const RirCatalog& catalog,
                     const std::vector<std::string>& speakers, Rng* rng) {
  std::vector<const std::pair<const std::string, std::vector<RirEntry>>*>
      eligible;
  for (const auto& room : catalog.rooms)
    if (room.second.size() >= speakers.size()) eligible.push_back(&room);
  if (eligible.empty())
    throw std::runtime_error(
        "plan_speaker_positions: no room with >= " +
        std::to_string(speakers.size()) + " positions");
  const auto& [room_id, positions] =
      *eligible[rng->UniformIndex(eligible.size())];
  const auto picks =
      SampleWithoutReplacement(positions.size(), speakers.size(), rng);
  std::map<std::string, std::pair<std::string, std::string>> plan;
  for (std::size_t i = 0; i < speakers.size(); ++i)
    plan[speakers[i]] = {room_id, positions[picks[i]].position_id};
  return plan;
}

nlohmann::json TurnLogToJson(const SimResult& result) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["conversation_id"] = result.timeline.conversation_id;
  nlohmann::json turns = nlohmann::json::array();
  for (const TurnLogEntry& t : result.turns) {
    nlohmann::json e;
    e["speaker"] = t.speaker;
    e["utterance"] = t.utterance_ref;
    e["delta"] = t.delta;
    e["transition"] = t.transition;
    if (t.base_mean)
      e["base_mean"] = *t.base_mean;
    else
      e["base_mean"] = nullptr;
    turns.push_back(std::move(e));
  }
  j["turns"] = std::move(turns);
  return j;
}

}  // namespace convsim

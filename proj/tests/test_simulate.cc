// tests/test_simulate.cc

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
#include <set>

#include <stdexcept>

#include <doctest.h>

#include "convsim/simulate.h"
#include "test_util.h"

using namespace convsim;
using convsim::testing::MakePool;

namespace {

KdeModel PointKde(std::vector<double> support, double bandwidth = 1e-12) {
  KdeModel m;
  m.transform.lambda = 1.0;
  m.bandwidth = bandwidth;
  m.support = std::move(support);
  return m;
}

TimingModel MakeFixedModel(double mean_same, double mean_diff, double p_self,
                           double p_pause = 1.0) {
  TimingModel model;
  model.mean_same = PointKde({mean_same});
  model.mean_diff = PointKde({mean_diff});
  model.dev_same = PointKde({0.0});
  model.dev_diff = PointKde({0.0});
  model.turn_template.states = {"self", "other"};
  model.turn_template.probs = {{p_self, 1.0 - p_self},
                               {p_self, 1.0 - p_self}};
  model.p_overlap = mean_diff < 0.0 ? 1.0 : 0.0;
  model.baseline.hist_same = Histogram::WithRange(0.0, 10.0, 0.05);
  model.baseline.hist_diff_pause = Histogram::WithRange(0.0, 10.0, 0.05);
  model.baseline.hist_overlap = Histogram::WithRange(0.0, 5.0, 0.05);
  model.baseline.hist_same.Add(0.3);
  model.baseline.hist_diff_pause.Add(0.2);
  model.baseline.hist_overlap.Add(0.4);
  model.baseline.p_pause = p_pause;
  return model;
}

}  // namespace

TEST_CASE("speaker-aware: degenerate model alternates with constant gaps") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 0.0);
  const UtterancePool pool = MakePool(2, 40, 77);
  SimConfig cfg;
  cfg.n_speakers = 2;
  cfg.n_utterances = 30;
  cfg.seed = 5;
  const SimResult result = SimulateConversation(model, pool, cfg, 0);

  const auto turns = TurnSequence(result.timeline);
  for (std::size_t i = 0; i + 1 < turns.size(); ++i)
    CHECK(turns[i] != turns[i + 1]);  // strict alternation at P(self) = 0
  for (const GapObservation& g : ExtractGaps(result.timeline))
    CHECK(g.gap == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("speaker-aware: same seed reproduces the identical turn log") {
  testing::CorpusSpec spec;
  spec.seed = 21;
  spec.mean_same_spread = 0.2;
  spec.mean_diff_spread = 0.2;
  const TimingModel model =
      FitTimingModel(testing::MakeSyntheticCorpus(spec));
  const UtterancePool pool = MakePool(4, 40, 78);
  SimConfig cfg;
  cfg.n_utterances = 25;
  cfg.n_conversations = 3;
  cfg.seed = 42;
  const auto a = Simulate(model, pool, cfg);
  const auto b = Simulate(model, pool, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(TurnLogToJson(a[i]).dump() == TurnLogToJson(b[i]).dump());
}

TEST_CASE("speaker-aware: extract_gaps recovers the logged deltas exactly") {
  testing::CorpusSpec spec;
  spec.seed = 22;
  spec.mean_diff_center = -0.4;
  spec.mean_same_spread = 0.3;
  spec.mean_diff_spread = 0.3;
  spec.dev_std = 0.3;
  const TimingModel model =
      FitTimingModel(testing::MakeSyntheticCorpus(spec));
  // Short utterances so the overlap bound actually clamps sometimes.
  const UtterancePool pool = MakePool(4, 60, 79, 0.3, 0.8);
  SimConfig cfg;
  cfg.n_utterances = 50;
  cfg.n_conversations = 10;
  cfg.seed = 1;
  for (const SimResult& result : Simulate(model, pool, cfg)) {
    const auto gaps = ExtractGaps(result.timeline);
    REQUIRE(gaps.size() + 1 == result.turns.size());
    for (std::size_t i = 0; i < gaps.size(); ++i)
      CHECK(gaps[i].gap == result.turns[i + 1].delta);  // exact
  }
}

TEST_CASE("speaker-aware: physical bounds hold under aggressive overlap") {
  const TimingModel model = MakeFixedModel(0.2, -3.0, 0.3);
  const UtterancePool pool = MakePool(3, 80, 80, 0.3, 0.6);
  SimConfig cfg;
  cfg.n_speakers = 3;
  cfg.n_utterances = 60;
  cfg.n_conversations = 5;
  cfg.seed = 9;
  for (const SimResult& result : Simulate(model, pool, cfg)) {
    CHECK(Validate(result.timeline).empty());
    const auto& segs = result.timeline.segments;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      CHECK(segs[i].start >= 0.0);
      if (i == 0) continue;
      const double gap = segs[i].start - segs[i - 1].End();
      if (gap < 0.0)
        CHECK(-gap <=
              std::min(segs[i - 1].duration, segs[i].duration) + 1e-12);
    }
  }
}

TEST_CASE("speaker-aware: zero deviation keeps per-speaker gaps at the base "
          "mean within a conversation") {
  TimingModel model = MakeFixedModel(0.5, 0.25, 0.5);
  // Spread-out mean distribution, but (near) zero deviations.
  model.mean_same = PointKde({0.2, 0.4, 0.6, 0.8}, 0.05);
  model.mean_diff = PointKde({0.1, 0.3}, 0.05);
  const UtterancePool pool = MakePool(2, 80, 81);
  SimConfig cfg;
  cfg.n_utterances = 60;
  cfg.seed = 33;
  const SimResult result = SimulateConversation(model, pool, cfg, 0);

  std::map<std::string, double> base;
  for (std::size_t i = 1; i < result.turns.size(); ++i) {
    const TurnLogEntry& t = result.turns[i];
    if (t.transition != "same") continue;
    REQUIRE(t.base_mean.has_value());
    auto [it, inserted] = base.emplace(t.speaker, *t.base_mean);
    CHECK(it->second == *t.base_mean);  // one base value per speaker
    CHECK(std::abs(t.delta - *t.base_mean) <= 1e-9);
  }
}

TEST_CASE("speaker-aware: no utterance repeats within a conversation") {
  testing::CorpusSpec spec;
  spec.seed = 23;
  spec.mean_same_spread = 0.2;
  spec.mean_diff_spread = 0.2;
  const TimingModel model =
      FitTimingModel(testing::MakeSyntheticCorpus(spec));
  const UtterancePool pool = MakePool(3, 50, 82);
  SimConfig cfg;
  cfg.n_speakers = 3;
  cfg.n_utterances = 80;
  cfg.seed = 3;
  const SimResult result = SimulateConversation(model, pool, cfg, 0);
  std::set<std::string> seen;
  for (const Segment& s : result.timeline.segments)
    CHECK(seen.insert(s.utterance_ref).second);
}

TEST_CASE("speaker-aware: ordered flag consumes pools in order") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 0.5);
  const UtterancePool pool = MakePool(2, 60, 88);
  SimConfig cfg;
  cfg.n_utterances = 50;
  cfg.seed = 12;
  cfg.ordered_utterances = true;
  const SimResult result = SimulateConversation(model, pool, cfg, 0);
  std::map<std::string, int> last_index;
  for (const TurnLogEntry& t : result.turns) {
    const int idx =
        std::stoi(t.utterance_ref.substr(t.utterance_ref.find("/u") + 2));
    auto it = last_index.find(t.speaker);
    if (it != last_index.end()) CHECK(idx > it->second);
    last_index[t.speaker] = idx;
  }
}

TEST_CASE("speaker-aware: pool exhaustion is an error") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 1.0);  // always self
  const UtterancePool pool = MakePool(2, 3, 83);
  SimConfig cfg;
  cfg.n_utterances = 10;
  cfg.seed = 2;
  CHECK_THROWS_WITH_AS(SimulateConversation(model, pool, cfg, 0),
                       doctest::Contains("exhausted"), std::runtime_error);
}

TEST_CASE("simulate: n_speakers beyond the pool is an error") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 0.5);
  const UtterancePool pool = MakePool(2, 10, 84);
  SimConfig cfg;
  cfg.n_speakers = 5;
  CHECK_THROWS_WITH_AS(SimulateConversation(model, pool, cfg, 0),
                       doctest::Contains("exceeds pool size"),
                       std::runtime_error);
}

TEST_CASE("baseline: p_pause = 1 yields no negative cross gaps") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 0.5, 1.0);
  const UtterancePool pool = MakePool(2, 120, 85);
  SimConfig cfg;
  cfg.generator = Generator::kBaseline;
  cfg.n_utterances = 100;
  cfg.n_conversations = 5;
  cfg.seed = 44;
  for (const SimResult& result : Simulate(model, pool, cfg))
    for (const GapObservation& g : ExtractGaps(result.timeline))
      CHECK(g.gap >= 0.0);
}

TEST_CASE("baseline: speaker choice is uniform and independent") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 0.9, 0.8);
  const UtterancePool pool = MakePool(2, 220, 86);
  SimConfig cfg;
  cfg.generator = Generator::kBaseline;
  cfg.n_utterances = 200;
  cfg.n_conversations = 50;
  cfg.seed = 45;
  const auto results = Simulate(model, pool, cfg);
  std::vector<Timeline> timelines;
  for (const SimResult& r : results) timelines.push_back(r.timeline);
  // Uniform independent choice over 2 speakers: P(same) = 0.5. The model's
  // own P(self) = 0.9 must have no effect on the baseline.
  const double frac = testing::SelfTransitionFraction(timelines);
  CHECK(frac == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("baseline: utterances consumed in pool order per speaker") {
  const TimingModel model = MakeFixedModel(0.5, 0.25, 0.5, 1.0);
  const UtterancePool pool = MakePool(2, 60, 87);
  SimConfig cfg;
  cfg.generator = Generator::kBaseline;
  cfg.n_utterances = 50;
  cfg.seed = 46;
  const SimResult result = SimulateConversation(model, pool, cfg, 0);
  std::map<std::string, int> last_index;
  for (const TurnLogEntry& t : result.turns) {
    const int idx = std::stoi(t.utterance_ref.substr(
        t.utterance_ref.find("/u") + 2));
    auto it = last_index.find(t.speaker);
    if (it != last_index.end()) CHECK(idx > it->second);
    last_index[t.speaker] = idx;
  }
}

TEST_CASE("plan_speaker_positions: one room, distinct positions") {
  RirCatalog catalog;
  catalog.rooms["room1"] = {{"p1", ""}, {"p2", ""}, {"p3", ""}, {"p4", ""}};
  Rng rng(6);
  const auto plan = PlanSpeakerPositions(catalog, {"A", "B"}, &rng);
  REQUIRE(plan.size() == 2);
  CHECK(plan.at("A").first == "room1");
  CHECK(plan.at("B").first == "room1");
  CHECK(plan.at("A").second != plan.at("B").second);
}

TEST_CASE("plan_speaker_positions: no room large enough is an error") {
  RirCatalog catalog;
  catalog.rooms["room1"] = {{"p1", ""}};
  Rng rng(6);
  CHECK_THROWS_WITH_AS(PlanSpeakerPositions(catalog, {"A", "B"}, &rng),
                       doctest::Contains("no room"), std::runtime_error);
}

TEST_CASE("plan_speaker_positions: same seed, same assignment") {
  RirCatalog catalog;
  catalog.rooms["r1"] = {{"p1", ""}, {"p2", ""}, {"p3", ""}};
  catalog.rooms["r2"] = {{"q1", ""}, {"q2", ""}, {"q3", ""}};
  Rng a(9), b(9);
  CHECK(PlanSpeakerPositions(catalog, {"A", "B"}, &a) ==
        PlanSpeakerPositions(catalog, {"A", "B"}, &b));
}

TEST_CASE("expand_turn_matrix: rows are stochastic") {
  TransitionMatrix tmpl;
  tmpl.states = {"self", "other"};
  tmpl.probs = {{0.3, 0.7}, {0.3, 0.7}};
  const auto m = ExpandTurnMatrix(tmpl, {"A", "B", "C"});
  CHECK(m.Check().empty());
  CHECK(m.probs[0][0] == doctest::Approx(0.3));
  CHECK(m.probs[0][1] == doctest::Approx(0.35));
  CHECK(m.probs[1][2] == doctest::Approx(0.35));
}

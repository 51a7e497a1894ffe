// tests/test_timing_model.cc

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
#include <fstream>

#include <stdexcept>

#include <doctest.h>

#include "convsim/timing_model.h"
#include "test_util.h"

using namespace convsim;
using convsim::testing::CorpusSpec;
using convsim::testing::MakeSyntheticCorpus;
using convsim::testing::PooledClassGaps;

namespace {

CorpusSpec DefaultSpec() {
  CorpusSpec spec;
  spec.n_conversations = 60;
  spec.n_turns = 60;
  spec.p_self = 0.4;
  spec.mean_same_spread = 0.1;
  spec.mean_diff_spread = 0.1;
  spec.seed = 5;
  return spec;
}

}  // namespace

TEST_CASE("fit: constant cross-speaker gaps force p_overlap = 1") {
  // Alternating same/cross pattern per conversation, cross gaps all -0.2.
  std::vector<Timeline> corpus;
  for (int c = 0; c < 6; ++c) {
    Timeline t;
    t.conversation_id = "c" + std::to_string(c);
    const std::string a = "a" + std::to_string(c);
    const std::string b = "b" + std::to_string(c);
    double prev_end = 0.0;
    double same_gap = 0.1;
    for (int n = 0; n < 40; ++n) {
      // Two turns of each speaker in a row, so both classes occur.
      const std::string& speaker = (n / 2) % 2 == 0 ? a : b;
      const bool same = n % 2 == 1;
      double gap = 0.0;
      if (n > 0) {
        gap = same ? same_gap : -0.2;
        if (same) same_gap += 0.01;  // varied same-speaker gaps
      }
      Segment seg;
      seg.speaker_id = speaker;
      seg.start = std::max(prev_end + gap, 0.0);
      seg.duration = 1.0;
      t.segments.push_back(seg);
      prev_end = seg.start + seg.duration;
    }
    corpus.push_back(std::move(t));
  }
  const TimingModel model = FitTimingModel(corpus);
  CHECK(model.p_overlap == 1.0);
  // Every per-speaker cross mean is -0.2 (up to start-time accumulation
  // rounding), so mean_diff concentrates there and samples return it.
  for (double z : model.mean_diff.support)
    CHECK(model.mean_diff.transform.Inverse(z) ==
          doctest::Approx(-0.2).epsilon(1e-9));
  Rng rng(7);
  for (int i = 0; i < 50; ++i)
    CHECK(KdeSample(model.mean_diff, &rng) ==
          doctest::Approx(-0.2).epsilon(1e-6));
}

TEST_CASE("fit: pooled cross gaps half negative give p_overlap = 0.5") {
  std::vector<Timeline> corpus;
  for (int c = 0; c < 6; ++c) {
    Timeline t;
    t.conversation_id = "c" + std::to_string(c);
    const std::string a = "a" + std::to_string(c);
    const std::string b = "b" + std::to_string(c);
    double prev_end = 0.0;
    int cross_count = 0;
    double same_gap = 0.1;
    for (int n = 0; n < 41; ++n) {
      const std::string& speaker = (n / 2) % 2 == 0 ? a : b;
      const bool same = n % 2 == 1;
      double gap = 0.0;
      if (n > 0) {
        if (same) {
          gap = same_gap;
          same_gap += 0.01;
        } else {
          gap = cross_count % 2 == 0 ? -0.2 : 0.3;
          ++cross_count;
        }
      }
      Segment seg;
      seg.speaker_id = speaker;
      seg.start = std::max(prev_end + gap, 0.0);
      seg.duration = 1.0;
      t.segments.push_back(seg);
      prev_end = seg.start + seg.duration;
    }
    corpus.push_back(std::move(t));
  }
  const TimingModel model = FitTimingModel(corpus);
  CHECK(model.p_overlap == 0.5);
  CHECK(model.baseline.p_pause == 0.5);
}

TEST_CASE("fit: recovers the generator's turn-keeping probability") {
  CorpusSpec spec = DefaultSpec();
  spec.n_conversations = 200;
  spec.n_turns = 100;
  spec.p_self = 0.3;
  const auto corpus = MakeSyntheticCorpus(spec);
  const TimingModel model = FitTimingModel(corpus);
  CHECK(model.SelfProbability() >= 0.27);
  CHECK(model.SelfProbability() <= 0.33);
  const auto problems = model.turn_template.Check();
  CHECK(problems.empty());
}

TEST_CASE("fit: deviation pools are centered by construction") {
  const auto corpus = MakeSyntheticCorpus(DefaultSpec());
  const TimingModel model = FitTimingModel(corpus);
  // Residual support points are stored transformed; check the original-space
  // residual mean through the inverse transform.
  for (const KdeModel* dev : {&model.dev_same, &model.dev_diff}) {
    std::vector<double> residuals;
    residuals.reserve(dev->support.size());
    for (double z : dev->support)
      residuals.push_back(dev->transform.Inverse(z));
    const double scale = testing::SampleStd(residuals);
    CHECK(std::abs(testing::SampleMean(residuals)) <= 1e-9 * scale);
  }
}

TEST_CASE("fit: p_overlap equals empirical negative mass; KDE mass close") {
  CorpusSpec spec = DefaultSpec();
  spec.mean_diff_center = -0.1;
  spec.dev_std = 0.15;
  const auto corpus = MakeSyntheticCorpus(spec);
  const TimingModel model = FitTimingModel(corpus);

  const auto pooled = PooledClassGaps(corpus);
  std::size_t neg = 0;
  for (double g : pooled.cross)
    if (g < 0.0) ++neg;
  const double empirical =
      static_cast<double>(neg) / static_cast<double>(pooled.cross.size());
  CHECK(model.p_overlap == empirical);  // exact, by definition

  // The smoothed model's negative-domain mass: compound of mean_diff and
  // dev_diff draws, within 0.05 of the empirical mass.
  Rng rng(404);
  std::size_t neg_model = 0;
  const int n_draws = 50000;
  for (int i = 0; i < n_draws; ++i) {
    const double mu = KdeSample(model.mean_diff, &rng);
    const double gap = mu + KdeSample(model.dev_diff, &rng);
    if (gap < 0.0) ++neg_model;
  }
  const double model_mass =
      static_cast<double>(neg_model) / static_cast<double>(n_draws);
  CHECK(std::abs(model_mass - model.p_overlap) < 0.05);
}

TEST_CASE("fit: errors name the offending class") {
  // Strictly alternating speakers: no same-speaker gaps at all.
  std::vector<Timeline> corpus;
  for (int c = 0; c < 3; ++c) {
    Timeline t;
    t.conversation_id = "c" + std::to_string(c);
    for (int n = 0; n < 30; ++n) {
      Segment seg;
      seg.speaker_id = n % 2 == 0 ? "a" : "b";
      seg.start = n * 1.2;
      seg.duration = 1.0;
      t.segments.push_back(seg);
    }
    corpus.push_back(std::move(t));
  }
  CHECK_THROWS_WITH_AS(FitTimingModel(corpus),
                       doctest::Contains("mean_same"), std::runtime_error);
}

TEST_CASE("fit: too few conversations") {
  CHECK_THROWS_WITH_AS(FitTimingModel({}),
                       "fit_timing_model: no conversations",
                       std::runtime_error);
  CorpusSpec spec = DefaultSpec();
  spec.n_conversations = 1;
  CHECK_THROWS_AS(FitTimingModel(MakeSyntheticCorpus(spec)),
                  std::runtime_error);
}

TEST_CASE("model serialization round-trips bit-exactly") {
  const auto corpus = MakeSyntheticCorpus(DefaultSpec());
  const TimingModel model = FitTimingModel(corpus);
  const TimingModel back = DeserializeModel(SerializeModel(model));

  CHECK(back.mean_same.transform.lambda == model.mean_same.transform.lambda);
  CHECK(back.mean_same.bandwidth == model.mean_same.bandwidth);
  CHECK(back.mean_same.support == model.mean_same.support);
  CHECK(back.mean_diff.support == model.mean_diff.support);
  CHECK(back.dev_same.support == model.dev_same.support);
  CHECK(back.dev_diff.support == model.dev_diff.support);
  CHECK(back.mean_same.clamp == model.mean_same.clamp);
  CHECK(back.p_overlap == model.p_overlap);
  CHECK(back.turn_template.probs == model.turn_template.probs);
  CHECK(back.baseline.hist_same.counts == model.baseline.hist_same.counts);
  CHECK(back.baseline.hist_overlap.counts ==
        model.baseline.hist_overlap.counts);
  CHECK(back.baseline.p_pause == model.baseline.p_pause);

  // Serialized text round-trips to the identical document.
  CHECK(SerializeModel(back).dump() == SerializeModel(model).dump());
}

TEST_CASE("model load: version errors") {
  const auto corpus = MakeSyntheticCorpus(DefaultSpec());
  const TimingModel model = FitTimingModel(corpus);
  nlohmann::json doc = SerializeModel(model);

  nlohmann::json no_version = doc;
  no_version.erase("schema_version");
  CHECK_THROWS_WITH_AS(DeserializeModel(no_version),
                       "model document: missing schema_version",
                       std::runtime_error);

  nlohmann::json wrong_version = doc;
  wrong_version["schema_version"] = 99;
  CHECK_THROWS_AS(DeserializeModel(wrong_version), std::runtime_error);
}

TEST_CASE("model save/load: truncated file fails to parse") {
  testing::TempDir tmp;
  const auto corpus = MakeSyntheticCorpus(DefaultSpec());
  const TimingModel model = FitTimingModel(corpus);
  SaveModel(model, tmp.File("model.json"));

  // Truncate the file and expect a parse error.
  {
    std::ifstream in(tmp.File("model.json"));
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    std::ofstream out(tmp.File("truncated.json"));
    out << text.substr(0, text.size() / 2);
  }
  CHECK_THROWS_AS(LoadModel(tmp.File("truncated.json")), std::runtime_error);
  // Intact file loads.
  const TimingModel back = LoadModel(tmp.File("model.json"));
  CHECK(back.p_overlap == model.p_overlap);
}

TEST_CASE("histogram: sampling stays within bins and respects mass") {
  Histogram h = Histogram::WithRange(0.0, 1.0, 0.1);
  for (int i = 0; i < 100; ++i) h.Add(0.05);  // first bin
  for (int i = 0; i < 100; ++i) h.Add(0.95);  // last bin
  h.Add(2.0);   // clipped into the last bin
  h.Add(-1.0);  // clipped into the first bin
  CHECK(h.counts.front() == 101.0);
  CHECK(h.counts.back() == 101.0);

  Rng rng(55);
  for (int i = 0; i < 2000; ++i) {
    const double s = h.Sample(&rng);
    CHECK(((s >= 0.0 && s < 0.1) || (s >= 0.9 && s < 1.0)));
  }
}

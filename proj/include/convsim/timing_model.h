// convsim/timing_model.h

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

#ifndef CONVSIM_TIMING_MODEL_H_
#define CONVSIM_TIMING_MODEL_H_

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "convsim/kde.h"
#include "convsim/rng.h"
#include "convsim/timeline.h"

namespace convsim {

// Row-stochastic transition matrix; rows sum to 1 within 1e-9.
struct TransitionMatrix {
  std::vector<std::string> states;
  std::vector<std::vector<double>> probs;

  // Violation messages, empty when well formed.
  std::vector<std::string> Check() const;
};

// Fixed-bin histogram; out-of-range values are clipped into the end bins.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> counts;

  static Histogram WithRange(double lo, double hi, double bin_width);
  double BinWidth() const;
  void Add(double value);
  double Total() const;
  // Bin chosen proportionally to count, value uniform within the bin.
  double Sample(Rng* rng) const;
};

// The Landini-style statistics: per-class pause histograms, overlap-magnitude
// histogram, and the pause-vs-overlap probability p = ds/(ds+ov).
struct BaselineStats {
  Histogram hist_same;        // same-speaker pauses, [0, 10] s
  Histogram hist_diff_pause;  // cross-speaker pauses >= 0, [0, 10] s
  Histogram hist_overlap;     // overlap magnitudes, (0, 5] s
  double p_pause = 1.0;
};

struct FitOptions {
  int min_gaps_per_speaker = 3;
  std::pair<double, double> same_clamp{0.0, 10.0};
  std::pair<double, double> cross_clamp{-5.0, 10.0};
  double histogram_bin_width = 0.05;
};

// Per-class counters reported by FitTimingModel, for CLI summaries.
struct FitSummary {
  std::size_t n_conversations = 0;
  std::size_t n_same_gaps = 0;
  std::size_t n_cross_gaps = 0;
  std::size_t n_mean_same = 0;   // (conversation, speaker) means retained
  std::size_t n_mean_diff = 0;
  std::size_t n_excluded_same = 0;  // (conversation, speaker) pairs dropped
  std::size_t n_excluded_diff = 0;
};

// The fitted speaker-aware timing model.
//
// mean_same / mean_diff are KDEs over per-(conversation, speaker) mean gaps;
// dev_same / dev_diff are KDEs over the pooled zero-mean residuals around
// those means. Cross-speaker gaps are attributed to the incoming speaker.
// turn_template is the 2-role {self, other} turn-keeping matrix, expanded to
// the concrete speaker set at simulation time.
struct TimingModel {
  KdeModel mean_same;
  KdeModel mean_diff;
  KdeModel dev_same;
  KdeModel dev_diff;
  TransitionMatrix turn_template;
  double p_overlap = 0.0;  // empirical fraction of cross-speaker gaps < 0
  BaselineStats baseline;

  double SelfProbability() const { return turn_template.probs[0][0]; }
};

TimingModel FitTimingModel(const std::vector<Timeline>& timelines,
                           const FitOptions& options = {},
                           FitSummary* summary = nullptr);

nlohmann::json SerializeModel(const TimingModel& model);
TimingModel DeserializeModel(const nlohmann::json& doc);

void SaveModel(const TimingModel& model, const std::string& path);
TimingModel LoadModel(const std::string& path);

}  // namespace convsim

#endif  // CONVSIM_TIMING_MODEL_H_

// convsim/timing_model.cc

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

#include "convsim/timing_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace convsim {

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kModelKind = "convsim-timing-model";

// A class sample whose values are all identical cannot go through KdeFit
// (zero variance). The model still has a well-defined limit: a point mass.
// Represent it as a near-delta kernel so sampling and density stay valid.
KdeModel PointMassKde(std::span<const double> data,
                      std::optional<std::pair<double, double>> clamp) {
  KdeModel model;
  model.transform.lambda = 1.0;
  model.bandwidth = 1e-9;
  model.support.assign(data.begin(), data.end());
  model.clamp = clamp;
  return model;
}

KdeModel FitClassKde(std::span<const double> data,
                     std::optional<std::pair<double, double>> clamp,
                     const std::string& class_name) {
  if (data.size() < 10)
    throw std::runtime_error("fit_timing_model: insufficient data for " +
                             class_name + ": " + std::to_string(data.size()) +
                             " values (need >= 10)");
  const double first = data.front();
  const bool constant =
      std::all_of(data.begin(), data.end(), [&](double x) { return x == first; });
  if (constant) return PointMassKde(data, clamp);
  return KdeFit(data, clamp);
}

double Mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

nlohmann::json KdeToJson(const KdeModel& m) {
  nlohmann::json j;
  j["lambda"] = m.transform.lambda;
  j["bandwidth"] = m.bandwidth;
  j["support"] = m.support;
  if (m.clamp)
    j["clamp"] = {m.clamp->first, m.clamp->second};
  else
    j["clamp"] = nullptr;
  return j;
}

KdeModel KdeFromJson(const nlohmann::json& j) {
  KdeModel m;
  m.transform.lambda = j.at("lambda").get<double>();
  m.bandwidth = j.at("bandwidth").get<double>();
  m.support = j.at("support").get<std::vector<double>>();
  if (!j.at("clamp").is_null()) {
    auto c = j.at("clamp").get<std::vector<double>>();
    if (c.size() != 2)
      throw std::runtime_error("model document: clamp must have 2 entries");
    m.clamp = {c[0], c[1]};
  }
  return m;
}

nlohmann::json HistogramToJson(const Histogram& h) {
  return nlohmann::json{{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}};
}

Histogram HistogramFromJson(const nlohmann::json& j) {
  Histogram h;
  h.lo = j.at("lo").get<double>();
  h.hi = j.at("hi").get<double>();
  h.counts = j.at("counts").get<std::vector<double>>();
  if (h.counts.empty())
    throw std::runtime_error("model document: histogram has no bins");
  return h;
}

}  // namespace

std::vector<std::string> TransitionMatrix::Check() const {
  std::vector<std::string> problems;
  if (probs.size() != states.size())
    problems.push_back("row count does not match state count");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != states.size()) {
      problems.push_back("row " + std::to_string(i) + " has wrong length");
      continue;
    }
    double sum = 0.0;
    for (double p : probs[i]) {
      if (p < 0.0)
        problems.push_back("row " + std::to_string(i) + " has negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      problems.push_back("row " + std::to_string(i) + " sums to " +
                         std::to_string(sum));
  }
  return problems;
}

Histogram Histogram::WithRange(double lo, double hi, double bin_width) {
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  const auto bins =
      static_cast<std::size_t>(std::llround((hi - lo) / bin_width));
  h.counts.assign(std::max<std::size_t>(bins, 1), 0.0);
  return h;
}

double Histogram::BinWidth() const {
  return (hi - lo) / static_cast<double>(counts.size());
}

void Histogram::Add(double value) {
  const double w = BinWidth();
  auto idx = static_cast<long long>(std::floor((value - lo) / w));
  idx = std::clamp<long long>(idx, 0,
                              static_cast<long long>(counts.size()) - 1);
  counts[static_cast<std::size_t>(idx)] += 1.0;
}

double Histogram::Total() const {
  double t = 0.0;
  for (double c : counts) t += c;
  return t;
}

double Histogram::Sample(Rng* rng) const {
  const double total = Total();
  if (!(total > 0.0))
    throw std::runtime_error("histogram sample: empty histogram");
  double target = rng->Uniform01() * total;
  std::size_t bin = counts.size() - 1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (target < counts[i]) {
      bin = i;
      break;
    }
    target -= counts[i];
  }
  const double w = BinWidth();
  return lo + (static_cast<double>(bin) + rng->Uniform01()) * w;
}

TimingModel FitTimingModel(const std::vector<Timeline>& timelines,
                           const FitOptions& options, FitSummary* summary) {
  if (timelines.empty())
    throw std::runtime_error("fit_timing_model: no conversations");
  if (timelines.size() < 2)
    throw std::runtime_error(
        "fit_timing_model: need at least 2 conversations, got 1");

  std::vector<double> means_same, means_diff;
  std::vector<double> dev_same_pool, dev_diff_pool;
  std::vector<double> cross_gaps_all;
  std::size_t n_same = 0, n_cross = 0;
  std::size_t excluded_same = 0, excluded_diff = 0;
  std::size_t self_transitions = 0, total_transitions = 0;

  BaselineStats baseline;
  baseline.hist_same =
      Histogram::WithRange(0.0, 10.0, options.histogram_bin_width);
  baseline.hist_diff_pause =
      Histogram::WithRange(0.0, 10.0, options.histogram_bin_width);
  baseline.hist_overlap =
      Histogram::WithRange(0.0, 5.0, options.histogram_bin_width);

  const auto min_gaps = static_cast<std::size_t>(
      std::max(options.min_gaps_per_speaker, 1));

  for (const Timeline& timeline : timelines) {
    const auto gaps = ExtractGaps(timeline);
    // Per-speaker class samples within this conversation.
    std::map<std::string, std::vector<double>> same_by_speaker;
    std::map<std::string, std::vector<double>> cross_by_speaker;
    for (const GapObservation& g : gaps) {
      ++total_transitions;
      if (g.transition == Transition::kSameSpeaker) {
        ++self_transitions;
        ++n_same;
        same_by_speaker[g.to_speaker].push_back(g.gap);
        baseline.hist_same.Add(std::max(g.gap, 0.0));
      } else {
        ++n_cross;
        cross_by_speaker[g.to_speaker].push_back(g.gap);
        cross_gaps_all.push_back(g.gap);
        if (g.gap >= 0.0)
          baseline.hist_diff_pause.Add(g.gap);
        else
          baseline.hist_overlap.Add(-g.gap);
      }
    }
    for (const auto& [speaker, values] : same_by_speaker) {
      if (values.size() < min_gaps) {
        ++excluded_same;
        continue;
      }
      const double mu = Mean(values);
      means_same.push_back(mu);
      for (double v : values) dev_same_pool.push_back(v - mu);
    }
    for (const auto& [speaker, values] : cross_by_speaker) {
      if (values.size() < min_gaps) {
        ++excluded_diff;
        continue;
      }
      const double mu = Mean(values);
      means_diff.push_back(mu);
      for (double v : values) dev_diff_pool.push_back(v - mu);
    }
  }

  if (total_transitions == 0)
    throw std::runtime_error("fit_timing_model: corpus has no transitions");

  TimingModel model;
  model.mean_same =
      FitClassKde(means_same, options.same_clamp, "mean_same (per-speaker "
                  "same-speaker mean gaps)");
  model.mean_diff =
      FitClassKde(means_diff, options.cross_clamp, "mean_diff (per-speaker "
                  "cross-speaker mean gaps)");
  model.dev_same = FitClassKde(dev_same_pool, std::nullopt,
                               "dev_same (same-speaker residuals)");
  model.dev_diff = FitClassKde(dev_diff_pool, std::nullopt,
                               "dev_diff (cross-speaker residuals)");

  const double p_self = static_cast<double>(self_transitions) /
                        static_cast<double>(total_transitions);
  model.turn_template.states = {"self", "other"};
  model.turn_template.probs = {{p_self, 1.0 - p_self},
                               {p_self, 1.0 - p_self}};

  std::size_t overlaps = 0;
  for (double g : cross_gaps_all)
    if (g < 0.0) ++overlaps;
  model.p_overlap = cross_gaps_all.empty()
                        ? 0.0
                        : static_cast<double>(overlaps) /
                              static_cast<double>(cross_gaps_all.size());

  const double ds = static_cast<double>(cross_gaps_all.size() - overlaps);
  const double ov = static_cast<double>(overlaps);
  baseline.p_pause = (ds + ov) > 0.0 ? ds / (ds + ov) : 1.0;
  model.baseline = std::move(baseline);

  if (summary) {
    summary->n_conversations = timelines.size();
    summary->n_same_gaps = n_same;
    summary->n_cross_gaps = n_cross;
    summary->n_mean_same = means_same.size();
    summary->n_mean_diff = means_diff.size();
    summary->n_excluded_same = excluded_same;
    summary->n_excluded_diff = excluded_diff;
  }
  return model;
}

nlohmann::json SerializeModel(const TimingModel& model) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kModelKind;
  j["mean_same"] = KdeToJson(model.mean_same);
  j["mean_diff"] = KdeToJson(model.mean_diff);
  j["dev_same"] = KdeToJson(model.dev_same);
  j["dev_diff"] = KdeToJson(model.dev_diff);
  j["turn_template"] = {{"states", model.turn_template.states},
                        {"probs", model.turn_template.probs}};
  j["p_overlap"] = model.p_overlap;
  j["baseline"] = {{"hist_same", HistogramToJson(model.baseline.hist_same)},
                   {"hist_diff_pause",
                    HistogramToJson(model.baseline.hist_diff_pause)},
                   {"hist_overlap",
                    HistogramToJson(model.baseline.hist_overlap)},
                   {"p_pause", model.baseline.p_pause}};
  return j;
}

TimingModel DeserializeModel(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version"))
    throw std::runtime_error("model document: missing schema_version");
  const int version = doc.at("schema_version").get<int>();
  if (version != kSchemaVersion)
    throw std::runtime_error("model document: unsupported schema_version " +
                             std::to_string(version));
  TimingModel model;
  model.mean_same = KdeFromJson(doc.at("mean_same"));
  model.mean_diff = KdeFromJson(doc.at("mean_diff"));
  model.dev_same = KdeFromJson(doc.at("dev_same"));
  model.dev_diff = KdeFromJson(doc.at("dev_diff"));
  model.turn_template.states =
      doc.at("turn_template").at("states").get<std::vector<std::string>>();
  model.turn_template.probs =
      doc.at("turn_template")
          .at("probs")
          .get<std::vector<std::vector<double>>>();
  const auto problems = model.turn_template.Check();
  if (!problems.empty())
    throw std::runtime_error("model document: bad turn_template: " +
                             problems.front());
  model.p_overlap = doc.at("p_overlap").get<double>();
  const auto& b = doc.at("baseline");
  model.baseline.hist_same = HistogramFromJson(b.at("hist_same"));
  model.baseline.hist_diff_pause = HistogramFromJson(b.at("hist_diff_pause"));
  model.baseline.hist_overlap = HistogramFromJson(b.at("hist_overlap"));
  model.baseline.p_pause = b.at("p_pause").get<double>();
  return model;
}

void SaveModel(const TimingModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << SerializeModel(model).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

TimingModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("model document: parse error in " + path + ": " +
                             e.what());
  }
  return DeserializeModel(doc);
}

}  // namespace convsim

// convsim/metrics.h

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

#ifndef CONVSIM_METRICS_H_
#define CONVSIM_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "convsim/timeline.h"

namespace convsim {

// Consecutive gap pair (g_i, g_{i+1}) within one conversation, attributed
// to the incoming speaker of g_i.
struct GapPair {
  double g_prev = 0.0;
  double g_next = 0.0;
  std::string speaker;
  std::string conversation_id;
};

struct SurvivalPoint {
  double t = 0.0;
  double s = 0.0;
};

struct MetricsReport {
  std::string label;
  double gap_mean = 0.0, gap_median = 0.0, gap_std = 0.0;
  double pearson = 0.0, spearman = 0.0, kendall = 0.0, dcorr = 0.0, mi = 0.0;
  double clayton_theta = 0.0, clayton_ll = 0.0;
  double gumbel_theta = 0.0, gumbel_ll = 0.0;
  bool clayton_at_bound = false, gumbel_at_bound = false;
  double turn_entropy = 0.0;
  std::vector<SurvivalPoint> survival;
  std::size_t n_gaps = 0, n_pairs = 0;
};

struct EvalOptions {
  uint64_t seed = 0;  // used only for distance-correlation subsampling
  double grid_min = -2.0, grid_max = 5.0, grid_step = 0.05;
  std::size_t dcorr_cap = 5000;
  int mi_bins = 16;
};

// mean, median (average of the two middle values for even n), and
// sample standard deviation (n-1 denominator).
std::tuple<double, double, double> GapStats(std::span<const double> gaps);

// Consecutive pairs from each conversation's gap sequence.
std::vector<GapPair> BuildGapPairs(const std::vector<Timeline>& timelines);

// Ranks 1..n with average ranks on ties; Uniformize maps them to
// rank/(n+1) in (0, 1).
std::vector<double> AverageRanks(std::span<const double> x);
std::vector<double> UniformizeRanks(std::span<const double> x);

double Pearson(std::span<const double> x, std::span<const double> y);
// Pearson on average ranks.
double Spearman(std::span<const double> x, std::span<const double> y);
// Tie-corrected tau-b.
double KendallTau(std::span<const double> x, std::span<const double> y);
// Double-centered distance covariance ratio; O(n^2) time, O(n) memory.
double DistanceCorrelation(std::span<const double> x,
                           std::span<const double> y);
// Plug-in estimate on rank-uniformized margins over a bins x bins grid,
// natural log. Requires n >= 100.
double MutualInformation(std::span<const double> x, std::span<const double> y,
                         int bins = 16);

enum class CopulaFamily { kClayton, kGumbel };

struct CopulaFit {
  double theta = 0.0;
  double mean_log_likelihood = 0.0;
  bool at_bound = false;  // optimum pinned to the search boundary
};

// Log copula densities on (0,1)^2.
double ClaytonLogDensity(double u, double v, double theta);
double GumbelLogDensity(double u, double v, double theta);

// Single-parameter MLE on rank-uniformized pairs; golden-section search,
// Clayton theta in (1e-6, 20], Gumbel theta in [1+1e-6, 20]. Requires
// n >= 50 pairs.
CopulaFit FitCopula(std::span<const double> x, std::span<const double> y,
                    CopulaFamily family);

// Normalized average row entropy of the turn-taking transition matrix,
// in [0, 1]. Counts are pooled over conversations with speakers mapped to
// first-appearance roles, stratified by speaker count. Throws when no
// conversation has two speakers.
double TurnTakingEntropy(const std::vector<Timeline>& timelines);

// Empirical survival S(t) = #{gap > t}/n on the given grid.
std::vector<SurvivalPoint> SurvivalCurve(std::span<const double> gaps,
                                         double grid_min, double grid_max,
                                         double grid_step);

// Composes everything above. Correlation measures are computed per speaker
// over that speaker's pairs and averaged unweighted; copulas are fitted on
// the pooled pairs. Deterministic given options.seed.
MetricsReport EvaluateCorpus(const std::vector<Timeline>& timelines,
                             const EvalOptions& options = {});

nlohmann::json ReportToJson(const MetricsReport& report);
MetricsReport ReportFromJson(const nlohmann::json& doc);
void SaveReport(const MetricsReport& report, const std::string& path);
MetricsReport LoadReport(const std::string& path);
void WriteSurvivalCsv(const MetricsReport& report, const std::string& path);

// Side-by-side text table, one column per report.
std::string CompareTable(const std::vector<MetricsReport>& reports);

}  // namespace convsim

#endif  // CONVSIM_METRICS_H_

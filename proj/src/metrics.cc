// convsim/metrics.cc

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

#include "convsim/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "convsim/rng.h"
#include "convsim/yeo_johnson.h"

namespace convsim {

namespace {

constexpr int kReportSchemaVersion = 1;
constexpr const char* kReportKind = "convsim-metrics-report";

bool ConstantMargin(std::span<const double> v) {
  for (double x : v)
    if (x != v.front()) return false;
  return true;
}

double Mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Uniformized margins shared by the MI and copula estimators.
std::pair<std::vector<double>, std::vector<double>> UniformizePairs(
    std::span<const double> x, std::span<const double> y) {
  return {UniformizeRanks(x), UniformizeRanks(y)};
}

}  // namespace

std::tuple<double, double, double> GapStats(std::span<const double> gaps) {
  if (gaps.empty()) throw std::runtime_error("gap_stats: empty input");
  if (gaps.size() < 2)
    throw std::runtime_error("gap_stats: need at least 2 gaps");
  const double mean = Mean(gaps);
  double ss = 0.0;
  for (double g : gaps) ss += (g - mean) * (g - mean);
  const double stddev =
      std::sqrt(ss / (static_cast<double>(gaps.size()) - 1.0));
  std::vector<double> sorted(gaps.begin(), gaps.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1
                            ? sorted[n / 2]
                            : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return {mean, median, stddev};
}

std::vector<GapPair> BuildGapPairs(const std::vector<Timeline>& timelines) {
  std::vector<GapPair> pairs;
  for (const Timeline& timeline : timelines) {
    const auto gaps = ExtractGaps(timeline);
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
      GapPair p;
      p.g_prev = gaps[i].gap;
      p.g_next = gaps[i + 1].gap;
      p.speaker = gaps[i].to_speaker;
      p.conversation_id = timeline.conversation_id;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

std::vector<double> AverageRanks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    // Tied run [i, j] shares the average of ranks i+1..j+1.
    const double avg = 0.5 * (static_cast<double>(i + 1) +
                              static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> UniformizeRanks(std::span<const double> x) {
  std::vector<double> u = AverageRanks(x);
  const double denom = static_cast<double>(x.size()) + 1.0;
  for (double& r : u) r /= denom;
  return u;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 3)
    throw std::runtime_error("pearson: need at least 3 pairs");
  if (ConstantMargin(x) || ConstantMargin(y))
    throw std::runtime_error("pearson: degenerate margin");
  const double mx = Mean(x), my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 3)
    throw std::runtime_error("spearman: need at least 3 pairs");
  return Pearson(AverageRanks(x), AverageRanks(y));
}

double KendallTau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("kendall: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::runtime_error("kendall: need at least 3 pairs");
  if (ConstantMargin(x) || ConstantMargin(y))
    throw std::runtime_error("kendall: degenerate margin");
  long long concordant = 0, discordant = 0;
  long long ties_x = 0, ties_y = 0;  // pairs tied in that margin
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                 (n0 - static_cast<double>(ties_y)));
  if (!(denom > 0.0)) throw std::runtime_error("kendall: degenerate margin");
  return static_cast<double>(concordant - discordant) / denom;
}

double DistanceCorrelation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("distance_correlation: length mismatch");
  const std::size_t n = x.size();
  if (n < 3)
    throw std::runtime_error("distance_correlation: need at least 3 pairs");
  if (ConstantMargin(x) || ConstantMargin(y))
    throw std::runtime_error("distance_correlation: degenerate margin");

  // Row sums of the distance matrices; the matrices themselves are never
  // stored (O(n) memory).
  std::vector<double> arow(n, 0.0), brow(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = std::abs(x[i] - x[j]);
      const double b = std::abs(y[i] - y[j]);
      arow[i] += a;
      arow[j] += a;
      brow[i] += b;
      brow[j] += b;
    }
  }
  const double nn = static_cast<double>(n);
  double agrand = 0.0, bgrand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    agrand += arow[i];
    bgrand += brow[i];
  }
  agrand /= nn * nn;
  bgrand /= nn * nn;

  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a =
          std::abs(x[i] - x[j]) - arow[i] / nn - arow[j] / nn + agrand;
      const double b =
          std::abs(y[i] - y[j]) - brow[i] / nn - brow[j] / nn + bgrand;
      sab += a * b;
      saa += a * a;
      sbb += b * b;
    }
  }
  const double dvar = std::sqrt(saa * sbb);
  if (!(dvar > 0.0))
    throw std::runtime_error("distance_correlation: degenerate margin");
  return std::sqrt(std::max(0.0, sab) / std::sqrt(saa * sbb));
}

double MutualInformation(std::span<const double> x, std::span<const double> y,
                         int bins) {
  if (x.size() != y.size())
    throw std::invalid_argument("mutual_information: length mismatch");
  const std::size_t n = x.size();
  if (n < 100)
    throw std::runtime_error("mutual_information: need at least 100 pairs");
  const auto [u, v] = UniformizePairs(x, y);
  const auto b = static_cast<std::size_t>(bins);
  std::vector<double> joint(b * b, 0.0), px(b, 0.0), py(b, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cx = std::min(
        b - 1, static_cast<std::size_t>(u[i] * static_cast<double>(bins)));
    const auto cy = std::min(
        b - 1, static_cast<std::size_t>(v[i] * static_cast<double>(bins)));
    joint[cx * b + cy] += 1.0;
  }
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      px[i] += joint[i * b + j];
      py[j] += joint[i * b + j];
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const double pij = joint[i * b + j] / nn;
      if (pij <= 0.0) continue;  // 0 * log 0 = 0
      mi += pij * std::log(pij * nn * nn / (px[i] * py[j]));
    }
  }
  return std::max(0.0, mi);
}

double ClaytonLogDensity(double u, double v, double theta) {
  const double a = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
  return std::log1p(theta) - (1.0 + theta) * (std::log(u) + std::log(v)) -
         (2.0 + 1.0 / theta) * std::log(a);
}

double GumbelLogDensity(double u, double v, double theta) {
  const double x = -std::log(u);
  const double y = -std::log(v);
  const double s = std::pow(x, theta) + std::pow(y, theta);
  const double t = std::pow(s, 1.0 / theta);  // = -ln C(u,v)
  return -t + (theta - 1.0) * (std::log(x) + std::log(y)) + (x + y) +
         (1.0 / theta - 2.0) * std::log(s) + std::log(t + theta - 1.0);
}

CopulaFit FitCopula(std::span<const double> x, std::span<const double> y,
                    CopulaFamily family) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_copula: length mismatch");
  if (x.size() < 50)
    throw std::runtime_error("fit_copula: need at least 50 pairs");
  const auto [u, v] = UniformizePairs(x, y);

  const bool clayton = family == CopulaFamily::kClayton;
  const double lo = clayton ? 1e-6 : 1.0 + 1e-6;
  const double hi = 20.0;
  auto mean_ll = [&](double theta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      acc += clayton ? ClaytonLogDensity(u[i], v[i], theta)
                     : GumbelLogDensity(u[i], v[i], theta);
    return acc / static_cast<double>(u.size());
  };

  CopulaFit fit;
  fit.theta = GoldenSectionMax(mean_ll, lo, hi, 1e-5);
  // A maximum pinned against the search range means the bracket failed;
  // report the boundary value and flag it.
  const double margin = 1e-4 * (hi - lo);
  if (fit.theta - lo < margin) {
    fit.theta = lo;
    fit.at_bound = true;
  } else if (hi - fit.theta < margin) {
    fit.theta = hi;
    fit.at_bound = true;
  }
  fit.mean_log_likelihood = mean_ll(fit.theta);
  return fit;
}

double TurnTakingEntropy(const std::vector<Timeline>& timelines) {
  struct Stratum {
    std::vector<double> counts;  // K*K transition counts, role-indexed
    std::size_t n_conversations = 0;
  };
  std::map<std::size_t, Stratum> strata;

  for (const Timeline& timeline : timelines) {
    const auto turns = TurnSequence(timeline);
    if (turns.size() < 2) continue;
    // Speakers become roles in order of first appearance, so counts pool
    // across conversations with disjoint speaker sets.
    std::map<std::string, std::size_t> role;
    std::vector<std::size_t> seq;
    seq.reserve(turns.size());
    for (const std::string& s : turns) {
      auto it = role.find(s);
      if (it == role.end()) {
        const std::size_t r = role.size();
        role[s] = r;
        seq.push_back(r);
      } else {
        seq.push_back(it->second);
      }
    }
    const std::size_t k = role.size();
    if (k < 2) continue;
    Stratum& st = strata[k];
    if (st.counts.empty()) st.counts.assign(k * k, 0.0);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
      st.counts[seq[i] * k + seq[i + 1]] += 1.0;
    ++st.n_conversations;
  }

  if (strata.empty())
    throw std::runtime_error(
        "turn-taking entropy undefined for single-speaker corpus");

  double total_conversations = 0.0;
  for (const auto& [k, st] : strata)
    total_conversations += static_cast<double>(st.n_conversations);

  double entropy = 0.0;
  for (const auto& [k, st] : strata) {
    const double norm = std::log2(static_cast<double>(k));
    double row_sum = 0.0;
    std::size_t rows_seen = 0;
    for (std::size_t i = 0; i < k; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) total += st.counts[i * k + j];
      if (!(total > 0.0)) continue;
      double h = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double p = st.counts[i * k + j] / total;
        if (p > 0.0) h -= p * std::log2(p);
      }
      row_sum += h / norm;
      ++rows_seen;
    }
    if (rows_seen == 0) continue;
    entropy += (static_cast<double>(st.n_conversations) /
                total_conversations) *
               (row_sum / static_cast<double>(rows_seen));
  }
  return std::clamp(entropy, 0.0, 1.0);
}

std::vector<SurvivalPoint> SurvivalCurve(std::span<const double> gaps,
                                         double grid_min, double grid_max,
                                         double grid_step) {
  if (gaps.empty()) throw std::runtime_error("survival_curve: empty input");
  if (!(grid_step > 0.0) || grid_max < grid_min)
    throw std::invalid_argument("survival_curve: bad grid");
  std::vector<double> sorted(gaps.begin(), gaps.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const auto steps =
      static_cast<std::size_t>(std::llround((grid_max - grid_min) / grid_step));
  std::vector<SurvivalPoint> curve;
  curve.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = grid_min + static_cast<double>(k) * grid_step;
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    const double exceed = static_cast<double>(sorted.end() - it);
    curve.push_back({t, exceed / n});
  }
  return curve;
}

MetricsReport EvaluateCorpus(const std::vector<Timeline>& timelines,
                             const EvalOptions& options) {
  if (timelines.size() < 2)
    throw std::runtime_error("evaluate: need at least 2 conversations");

  std::vector<double> gaps;
  for (const Timeline& t : timelines)
    for (const GapObservation& g : ExtractGaps(t)) gaps.push_back(g.gap);

  MetricsReport report;
  report.n_gaps = gaps.size();
  std::tie(report.gap_mean, report.gap_median, report.gap_std) =
      GapStats(gaps);

  const auto pairs = BuildGapPairs(timelines);
  report.n_pairs = pairs.size();

  // Per-speaker pair samples, speakers in sorted order.
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      by_speaker;
  for (const GapPair& p : pairs) {
    by_speaker[p.speaker].first.push_back(p.g_prev);
    by_speaker[p.speaker].second.push_back(p.g_next);
  }

  // Metric per eligible speaker, then unweighted mean over speakers.
  auto aggregate =
      [&](const char* name, std::size_t min_n,
          const std::function<double(std::span<const double>,
                                     std::span<const double>, std::size_t)>&
              fn) {
        double acc = 0.0;
        std::size_t used = 0, speaker_index = 0;
        for (const auto& [speaker, xy] : by_speaker) {
          ++speaker_index;
          const auto& [x, y] = xy;
          if (x.size() < min_n || ConstantMargin(x) || ConstantMargin(y))
            continue;
          acc += fn(x, y, speaker_index - 1);
          ++used;
        }
        if (used == 0)
          throw std::runtime_error(std::string("evaluate: no speaker has "
                                               "enough gap pairs for ") +
                                   name);
        return acc / static_cast<double>(used);
      };

  report.pearson = aggregate(
      "pearson", 3,
      [](auto x, auto y, std::size_t) { return Pearson(x, y); });
  report.spearman = aggregate(
      "spearman", 3,
      [](auto x, auto y, std::size_t) { return Spearman(x, y); });
  report.kendall = aggregate(
      "kendall", 3,
      [](auto x, auto y, std::size_t) { return KendallTau(x, y); });
  report.dcorr = aggregate(
      "distance correlation", 3,
      [&](std::span<const double> x, std::span<const double> y,
          std::size_t speaker_index) {
        if (x.size() <= options.dcorr_cap) return DistanceCorrelation(x, y);
        Rng rng = Rng(options.seed).Child(speaker_index);
        const auto picks =
            SampleWithoutReplacement(x.size(), options.dcorr_cap, &rng);
        std::vector<double> xs, ys;
        xs.reserve(picks.size());
        ys.reserve(picks.size());
        for (std::size_t i : picks) {
          xs.push_back(x[i]);
          ys.push_back(y[i]);
        }
        return DistanceCorrelation(xs, ys);
      });
  report.mi = aggregate("mutual information", 100,
                        [&](auto x, auto y, std::size_t) {
                          return MutualInformation(x, y, options.mi_bins);
                        });

  // Copulas are fitted on the pooled pairs: the single-parameter MLE wants
  // all the data, and per-speaker thetas have no natural mean.
  std::vector<double> all_prev, all_next;
  all_prev.reserve(pairs.size());
  all_next.reserve(pairs.size());
  for (const GapPair& p : pairs) {
    all_prev.push_back(p.g_prev);
    all_next.push_back(p.g_next);
  }
  const CopulaFit clayton =
      FitCopula(all_prev, all_next, CopulaFamily::kClayton);
  const CopulaFit gumbel = FitCopula(all_prev, all_next, CopulaFamily::kGumbel);
  report.clayton_theta = clayton.theta;
  report.clayton_ll = clayton.mean_log_likelihood;
  report.clayton_at_bound = clayton.at_bound;
  report.gumbel_theta = gumbel.theta;
  report.gumbel_ll = gumbel.mean_log_likelihood;
  report.gumbel_at_bound = gumbel.at_bound;

  report.turn_entropy = TurnTakingEntropy(timelines);
  report.survival =
      SurvivalCurve(gaps, options.grid_min, options.grid_max,
                    options.grid_step);
  return report;
}

nlohmann::json ReportToJson(const MetricsReport& report) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = kReportKind;
  j["label"] = report.label;
  j["gap_mean"] = report.gap_mean;
  j["gap_median"] = report.gap_median;
  j["gap_std"] = report.gap_std;
  j["pearson"] = report.pearson;
  j["spearman"] = report.spearman;
  j["kendall"] = report.kendall;
  j["dcorr"] = report.dcorr;
  j["mi"] = report.mi;
  j["clayton_theta"] = report.clayton_theta;
  j["clayton_ll"] = report.clayton_ll;
  j["clayton_at_bound"] = report.clayton_at_bound;
  j["gumbel_theta"] = report.gumbel_theta;
  j["gumbel_ll"] = report.gumbel_ll;
  j["gumbel_at_bound"] = report.gumbel_at_bound;
  j["turn_entropy"] = report.turn_entropy;
  nlohmann::json survival = nlohmann::json::array();
  for (const SurvivalPoint& p : report.survival)
    survival.push_back({p.t, p.s});
  j["survival"] = std::move(survival);
  j["n_gaps"] = report.n_gaps;
  j["n_pairs"] = report.n_pairs;
  return j;
}

MetricsReport ReportFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version"))
    throw std::runtime_error("report document: missing schema_version");
  if (doc.at("schema_version").get<int>() != kReportSchemaVersion)
    throw std::runtime_error("report document: unsupported schema_version " +
                             doc.at("schema_version").dump());
  MetricsReport r;
  r.label = doc.at("label").get<std::string>();
  r.gap_mean = doc.at("gap_mean").get<double>();
  r.gap_median = doc.at("gap_median").get<double>();
  r.gap_std = doc.at("gap_std").get<double>();
  r.pearson = doc.at("pearson").get<double>();
  r.spearman = doc.at("spearman").get<double>();
  r.kendall = doc.at("kendall").get<double>();
  r.dcorr = doc.at("dcorr").get<double>();
  r.mi = doc.at("mi").get<double>();
  r.clayton_theta = doc.at("clayton_theta").get<double>();
  r.clayton_ll = doc.at("clayton_ll").get<double>();
  r.clayton_at_bound = doc.at("clayton_at_bound").get<bool>();
  r.gumbel_theta = doc.at("gumbel_theta").get<double>();
  r.gumbel_ll = doc.at("gumbel_ll").get<double>();
  r.gumbel_at_bound = doc.at("gumbel_at_bound").get<bool>();
  r.turn_entropy = doc.at("turn_entropy").get<double>();
  for (const auto& p : doc.at("survival"))
    r.survival.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  r.n_gaps = doc.at("n_gaps").get<std::size_t>();
  r.n_pairs = doc.at("n_pairs").get<std::size_t>();
  return r;
}

void SaveReport(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << ReportToJson(report).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

MetricsReport LoadReport(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("report document: parse error in " + path +
                             ": " + e.what());
  }
  return ReportFromJson(doc);
}

void WriteSurvivalCsv(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write survival CSV: " + path);
  out << "t,survival\n";
  char buf[64];
  for (const SurvivalPoint& p : report.survival) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", p.t, p.s);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string CompareTable(const std::vector<MetricsReport>& reports) {
  struct Row {
    const char* name;
    std::function<double(const MetricsReport&)> get;
  };
  const std::vector<Row> rows = {
      {"gap_mean", [](const MetricsReport& r) { return r.gap_mean; }},
      {"gap_median", [](const MetricsReport& r) { return r.gap_median; }},
      {"gap_std", [](const MetricsReport& r) { return r.gap_std; }},
      {"pearson", [](const MetricsReport& r) { return r.pearson; }},
      {"spearman", [](const MetricsReport& r) { return r.spearman; }},
      {"kendall", [](const MetricsReport& r) { return r.kendall; }},
      {"dcorr", [](const MetricsReport& r) { return r.dcorr; }},
      {"mi", [](const MetricsReport& r) { return r.mi; }},
      {"clayton_ll", [](const MetricsReport& r) { return r.clayton_ll; }},
      {"gumbel_ll", [](const MetricsReport& r) { return r.gumbel_ll; }},
      {"turn_entropy", [](const MetricsReport& r) { return r.turn_entropy; }},
  };
  constexpr int kColWidth = 14;
  std::string out = "metric        ";
  char buf[64];
  for (const MetricsReport& r : reports) {
    std::snprintf(buf, sizeof(buf), " %*s", kColWidth,
                  r.label.empty() ? "(unlabeled)" : r.label.c_str());
    out += buf;
  }
  out += "\n";
  for (const Row& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s", row.name);
    out += buf;
    for (const MetricsReport& r : reports) {
      std::snprintf(buf, sizeof(buf), " %*.6g", kColWidth, row.get(r));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace convsim

// tools/convsim_main.cc

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

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "convsim/manifest.h"
#include "convsim/metrics.h"
#include "convsim/render.h"
#include "convsim/rttm.h"
#include "convsim/simulate.h"
#include "convsim/timing_model.h"

namespace fs = std::filesystem;
using namespace convsim;

namespace {

bool Quiet() {
  const char* level = std::getenv("CONVSIM_LOG");
  return level != nullptr && std::string(level) == "quiet";
}

void Info(const std::string& msg) {
  if (!Quiet()) std::cerr << msg << "\n";
}

void RequireExists(const std::string& path, const char* what) {
  if (!fs::exists(path))
    throw std::runtime_error(std::string(what) + " not found: " + path);
}

int RunFit(const std::string& annotations, const std::string& out_model,
           int min_gaps) {
  RequireExists(annotations, "annotations path");
  const auto timelines = ReadAnnotations(annotations);
  if (timelines.empty()) throw std::runtime_error("no conversations in input");

  FitOptions options;
  options.min_gaps_per_speaker = min_gaps;
  FitSummary summary;
  const TimingModel model = FitTimingModel(timelines, options, &summary);
  SaveModel(model, out_model);

  std::printf("conversations:        %zu\n", summary.n_conversations);
  std::printf("same-speaker gaps:    %zu\n", summary.n_same_gaps);
  std::printf("cross-speaker gaps:   %zu\n", summary.n_cross_gaps);
  std::printf("p_overlap:            %.4f\n", model.p_overlap);
  std::printf("p_self:               %.4f\n", model.SelfProbability());
  std::printf("mean_same:  n=%zu lambda=%.4f bandwidth=%.5f\n",
              model.mean_same.support.size(), model.mean_same.transform.lambda,
              model.mean_same.bandwidth);
  std::printf("mean_diff:  n=%zu lambda=%.4f bandwidth=%.5f\n",
              model.mean_diff.support.size(), model.mean_diff.transform.lambda,
              model.mean_diff.bandwidth);
  std::printf("dev_same:   n=%zu lambda=%.4f bandwidth=%.5f\n",
              model.dev_same.support.size(), model.dev_same.transform.lambda,
              model.dev_same.bandwidth);
  std::printf("dev_diff:   n=%zu lambda=%.4f bandwidth=%.5f\n",
              model.dev_diff.support.size(), model.dev_diff.transform.lambda,
              model.dev_diff.bandwidth);
  std::printf("excluded sparse speakers: same=%zu cross=%zu (min gaps %d)\n",
              summary.n_excluded_same, summary.n_excluded_diff, min_gaps);
  std::printf("model written: %s\n", out_model.c_str());
  return 0;
}

struct SimulateArgs {
  std::string model_path;
  std::string pool_manifest;
  std::string out_dir;
  int n_speakers = 2;
  int n_utterances = 10;
  int n_conversations = 1;
  uint64_t seed = 0;
  std::string generator = "speaker-aware";
  bool ordered_utterances = false;
  bool render = false;
  std::string rir_manifest;
  std::string noise_manifest;
  int jobs = 1;
};

int RunSimulate(const SimulateArgs& args) {
  RequireExists(args.model_path, "model path");
  RequireExists(args.pool_manifest, "pool manifest");
  if (args.render) {
    RequireExists(args.rir_manifest, "RIR manifest");
    RequireExists(args.noise_manifest, "noise manifest");
  }

  const TimingModel model = LoadModel(args.model_path);
  const UtterancePool pool = LoadPool(args.pool_manifest);

  SimConfig cfg;
  cfg.n_speakers = args.n_speakers;
  cfg.n_utterances = args.n_utterances;
  cfg.n_conversations = args.n_conversations;
  cfg.seed = args.seed;
  cfg.ordered_utterances = args.ordered_utterances;
  cfg.generator = args.generator == "baseline" ? Generator::kBaseline
                                               : Generator::kSpeakerAware;

  const std::string label =
      cfg.generator == Generator::kBaseline ? "baseline" : "speaker_aware";
  const fs::path out_dir = fs::path(args.out_dir) / label;
  fs::create_directories(out_dir);

  RirCatalog rirs;
  NoiseCatalog noises;
  if (args.render) {
    rirs = LoadRirCatalog(args.rir_manifest, cfg.n_speakers);
    noises = LoadNoiseCatalog(args.noise_manifest);
  }

  // Conversations are independent given their child seeds; worker count
  // changes scheduling only, never file contents.
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::string first_error;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.n_conversations) return;
      try {
        SimResult result = SimulateConversation(model, pool, cfg, i);
        const std::string stem = result.timeline.conversation_id;
        WriteRttm({result.timeline}, (out_dir / (stem + ".rttm")).string());
        std::ofstream turns(out_dir / (stem + "_turns.json"));
        turns << TurnLogToJson(result).dump(2) << "\n";
        if (!turns)
          throw std::runtime_error("write failed: " + stem + "_turns.json");
        if (args.render) {
          // Independent render stream so timeline bytes do not depend on
          // whether rendering is enabled.
          Rng render_rng = Rng(cfg.seed ^ 0x52454E44ULL).Child(
              static_cast<uint64_t>(i));
          RenderOutput rendered =
              RenderConversation(&result, pool, rirs, noises, &render_rng);
          WriteWav(rendered.audio, (out_dir / (stem + ".wav")).string());
          WriteRttm({rendered.ground_truth},
                    (out_dir / (stem + "_rendered.rttm")).string());
          std::ofstream sidecar(out_dir / (stem + "_render.json"));
          sidecar << rendered.sidecar.dump(2) << "\n";
          if (!sidecar)
            throw std::runtime_error("write failed: " + stem +
                                     "_render.json");
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
        next.store(cfg.n_conversations);
        return;
      }
    }
  };

  const int jobs = std::max(1, args.jobs);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(jobs) - 1);
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);

  Info("wrote " + std::to_string(cfg.n_conversations) + " conversations to " +
       out_dir.string());
  return 0;
}

int RunEvaluate(const std::string& annotations, const std::string& out_report,
                const std::string& survival_csv, const std::string& label,
                const EvalOptions& options) {
  RequireExists(annotations, "annotations path");
  const auto timelines = ReadAnnotations(annotations);
  MetricsReport report = EvaluateCorpus(timelines, options);
  report.label = label.empty()
                     ? fs::path(annotations).filename().string()
                     : label;
  SaveReport(report, out_report);
  if (!survival_csv.empty()) WriteSurvivalCsv(report, survival_csv);
  Info("report written: " + out_report);
  return 0;
}

int RunCompare(const std::vector<std::string>& report_paths,
               const std::string& out_json) {
  std::vector<MetricsReport> reports;
  nlohmann::json combined = nlohmann::json::array();
  for (const std::string& path : report_paths) {
    RequireExists(path, "report path");
    reports.push_back(LoadReport(path));
    combined.push_back(ReportToJson(reports.back()));
  }
  std::cout << CompareTable(reports);
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    out << combined.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + out_json);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "convsim: fit conversation timing models, simulate multi-speaker "
      "conversations, render audio, and score corpora"};
  app.require_subcommand(1);

  // fit
  std::string fit_annotations, fit_out;
  int fit_min_gaps = 3;
  CLI::App* fit = app.add_subcommand(
      "fit", "fit a timing model from RTTM/CSV annotations");
  fit->add_option("--annotations", fit_annotations,
                  "RTTM/CSV file or directory")
      ->required();
  fit->add_option("--out", fit_out, "output model JSON path")->required();
  fit->add_option("--min-gaps", fit_min_gaps,
                  "minimum gaps per speaker and class");

  // simulate
  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "generate simulated conversations");
  simulate->add_option("--model", sim.model_path, "timing model JSON")
      ->required();
  simulate->add_option("--pool", sim.pool_manifest, "utterance pool manifest")
      ->required();
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--n-speakers", sim.n_speakers, "speakers per "
                       "conversation");
  simulate->add_option("--n-utterances", sim.n_utterances,
                       "turns per conversation");
  simulate->add_option("--n-conversations", sim.n_conversations,
                       "number of conversations");
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--generator", sim.generator,
                       "speaker-aware | baseline")
      ->check(CLI::IsMember({"speaker-aware", "baseline"}));
  simulate->add_flag("--ordered-utterances", sim.ordered_utterances,
                     "consume each speaker's pool in order");
  CLI::Option* render_flag =
      simulate->add_flag("--render", sim.render, "render mixed audio");
  CLI::Option* rir_opt =
      simulate->add_option("--rir-manifest", sim.rir_manifest,
                           "room impulse response manifest");
  CLI::Option* noise_opt = simulate->add_option(
      "--noise-manifest", sim.noise_manifest, "background noise manifest");
  render_flag->needs(rir_opt);
  render_flag->needs(noise_opt);
  simulate->add_option("--jobs", sim.jobs, "worker threads");

  // evaluate
  std::string eval_annotations, eval_out, eval_csv, eval_label;
  EvalOptions eval_options;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score a corpus with intrinsic metrics");
  evaluate->add_option("--annotations", eval_annotations,
                       "RTTM/CSV file or directory")
      ->required();
  evaluate->add_option("--out", eval_out, "output report JSON")->required();
  evaluate->add_option("--survival-csv", eval_csv,
                       "also write the survival curve as CSV");
  evaluate->add_option("--label", eval_label, "corpus label for compare");
  evaluate->add_option("--seed", eval_options.seed, "metrics seed");
  evaluate->add_option("--grid-min", eval_options.grid_min,
                       "survival grid start (s)");
  evaluate->add_option("--grid-max", eval_options.grid_max,
                       "survival grid end (s)");
  evaluate->add_option("--grid-step", eval_options.grid_step,
                       "survival grid step (s)");

  // compare
  std::vector<std::string> compare_paths;
  std::string compare_out;
  CLI::App* compare =
      app.add_subcommand("compare", "tabulate reports side by side");
  compare->add_option("reports", compare_paths, "report JSON paths")
      ->required()
      ->expected(-1);
  compare->add_option("--out", compare_out, "combined JSON output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) return RunFit(fit_annotations, fit_out, fit_min_gaps);
    if (*simulate) return RunSimulate(sim);
    if (*evaluate)
      return RunEvaluate(eval_annotations, eval_out, eval_csv, eval_label,
                         eval_options);
    if (*compare) return RunCompare(compare_paths, compare_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// convsim/render.cc

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

#include "convsim/render.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace convsim {

namespace {

// Direct convolution is cheaper below this n*m product.
constexpr std::size_t kFftThreshold = 1u << 20;

void Fft(std::vector<std::complex<double>>* a, bool inverse) {
  const std::size_t n = a->size();
  auto& v = *a;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle =
        2.0 * std::numbers::pi / static_cast<double>(len) *
        (inverse ? -1.0 : 1.0);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = v[i + k];
        const std::complex<double> t = v[i + k + len / 2] * w;
        v[i + k] = u + t;
        v[i + k + len / 2] = u - t;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : v) x /= static_cast<double>(n);
}

double Power(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

}  // namespace

std::vector<double> ConvolveDirect(std::span<const double> a,
                                   std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> ConvolveFft(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  Fft(&fa, false);
  Fft(&fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  Fft(&fa, true);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

AudioBuffer ConvolveRir(const AudioBuffer& utterance, const AudioBuffer& rir,
                        double* gain_out) {
  if (utterance.sample_rate != rir.sample_rate)
    throw std::runtime_error(
        "convolve_rir: sample-rate mismatch (" +
        std::to_string(utterance.sample_rate) + " vs " +
        std::to_string(rir.sample_rate) + ")");
  AudioBuffer out;
  out.sample_rate = utterance.sample_rate;
  out.samples =
      utterance.samples.size() * rir.samples.size() > kFftThreshold
          ? ConvolveFft(utterance.samples, rir.samples)
          : ConvolveDirect(utterance.samples, rir.samples);
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  double gain = 1.0;
  if (peak > 1.0) {
    gain = 1.0 / peak;
    for (double& v : out.samples) v *= gain;
  }
  if (gain_out) *gain_out = gain;
  return out;
}

MixOutput MixTimeline(const Timeline& timeline,
                      const std::vector<AudioBuffer>& rendered) {
  if (timeline.segments.size() != rendered.size())
    throw std::invalid_argument(
        "mix_timeline: rendered buffer count does not match segments");
  MixOutput out;
  if (rendered.empty()) return out;
  const double fs = rendered.front().sample_rate;
  for (const AudioBuffer& r : rendered)
    if (r.sample_rate != fs)
      throw std::runtime_error("mix_timeline: sample-rate mismatch");

  std::size_t total = 0;
  std::vector<std::size_t> offsets(rendered.size());
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    offsets[i] = static_cast<std::size_t>(
        std::llround(timeline.segments[i].start * fs));
    total = std::max(total, offsets[i] + rendered[i].samples.size());
  }
  out.audio.sample_rate = fs;
  out.audio.samples.assign(total, 0.0);
  for (std::size_t i = 0; i < rendered.size(); ++i)
    for (std::size_t k = 0; k < rendered[i].samples.size(); ++k)
      out.audio.samples[offsets[i] + k] += rendered[i].samples[k];

  double peak = 0.0;
  for (double v : out.audio.samples) peak = std::max(peak, std::abs(v));
  out.gain = 1.0 / std::max(1.0, peak);
  if (out.gain != 1.0)
    for (double& v : out.audio.samples) v *= out.gain;
  return out;
}

NoiseOutput AddNoise(const AudioBuffer& signal, const AudioBuffer& noise,
                     double snr_db, Rng* rng) {
  if (signal.sample_rate != noise.sample_rate)
    throw std::runtime_error("add_noise: sample-rate mismatch");
  if (signal.samples.empty() || noise.samples.empty())
    throw std::runtime_error("add_noise: empty signal or noise");

  const std::size_t n = signal.samples.size();
  const std::size_t offset = rng->UniformIndex(noise.samples.size());
  std::vector<double> slice(n);
  for (std::size_t i = 0; i < n; ++i)
    slice[i] = noise.samples[(offset + i) % noise.samples.size()];

  const double p_signal = Power(signal.samples);
  const double p_noise = Power(slice);
  if (!(p_signal > 0.0)) throw std::runtime_error("add_noise: silent signal");
  if (!(p_noise > 0.0)) throw std::runtime_error("add_noise: silent noise");

  NoiseOutput out;
  out.noise_offset = offset;
  out.noise_gain =
      std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  out.audio.sample_rate = signal.sample_rate;
  out.audio.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.audio.samples[i] = signal.samples[i] + out.noise_gain * slice[i];
  return out;
}

RenderOutput RenderConversation(SimResult* result, const UtterancePool& pool,
                                const RirCatalog& rirs,
                                const NoiseCatalog& noises, Rng* rng) {
  const Timeline& dry = result->timeline;
  if (dry.segments.empty())
    throw std::runtime_error("render: empty timeline");
  if (pool.sample_rate != rirs.sample_rate ||
      pool.sample_rate != noises.sample_rate)
    throw std::runtime_error(
        "render: pool, RIR, and noise sample rates must match");
  const double fs = pool.sample_rate;

  std::vector<std::string> speakers;
  for (const Segment& s : dry.segments)
    if (std::find(speakers.begin(), speakers.end(), s.speaker_id) ==
        speakers.end())
      speakers.push_back(s.speaker_id);
  result->speaker_positions = PlanSpeakerPositions(rirs, speakers, rng);

  // Load each speaker's impulse response once.
  std::map<std::string, AudioBuffer> rir_by_speaker;
  const std::string room = result->speaker_positions.begin()->second.first;
  for (const auto& [speaker, placement] : result->speaker_positions) {
    const auto& entries = rirs.rooms.at(placement.first);
    for (const RirEntry& e : entries)
      if (e.position_id == placement.second)
        rir_by_speaker[speaker] = ReadWav(e.locator);
  }

  // Utterance audio by ref (unique within a conversation).
  std::map<std::string, const UtteranceEntry*> entry_by_ref;
  for (const auto& [speaker, entries] : pool.speakers)
    for (const UtteranceEntry& e : entries) entry_by_ref[e.ref] = &e;

  std::vector<AudioBuffer> rendered;
  nlohmann::json gains = nlohmann::json::array();
  rendered.reserve(dry.segments.size());
  for (const Segment& seg : dry.segments) {
    auto it = entry_by_ref.find(seg.utterance_ref);
    if (it == entry_by_ref.end())
      throw std::runtime_error("render: utterance not in pool: " +
                               seg.utterance_ref);
    const AudioBuffer wet_in = ReadWav(it->second->locator);
    double gain = 1.0;
    rendered.push_back(
        ConvolveRir(wet_in, rir_by_speaker.at(seg.speaker_id), &gain));
    gains.push_back(gain);
  }

  MixOutput mix = MixTimeline(dry, rendered);

  const std::size_t noise_idx = rng->UniformIndex(noises.noises.size());
  const double snr_db =
      noises.snr_choices[rng->UniformIndex(noises.snr_choices.size())];
  const AudioBuffer noise = ReadWav(noises.noises[noise_idx].second);
  NoiseOutput noisy = AddNoise(mix.audio, noise, snr_db, rng);

  double peak = 0.0;
  for (double v : noisy.audio.samples) peak = std::max(peak, std::abs(v));
  const double final_gain = 1.0 / std::max(1.0, peak);
  if (final_gain != 1.0)
    for (double& v : noisy.audio.samples) v *= final_gain;

  RenderOutput out;
  out.audio = std::move(noisy.audio);

  // Ground truth keeps dry extents, quantized to the sample grid.
  out.ground_truth.conversation_id = dry.conversation_id;
  out.ground_truth.sample_rate_hint = fs;
  for (const Segment& seg : dry.segments) {
    Segment q = seg;
    q.start = static_cast<double>(std::llround(seg.start * fs)) / fs;
    q.duration =
        static_cast<double>(std::llround(seg.duration * fs)) / fs;
    out.ground_truth.segments.push_back(std::move(q));
  }

  out.sidecar["schema_version"] = 1;
  out.sidecar["conversation_id"] = dry.conversation_id;
  out.sidecar["room"] = room;
  nlohmann::json positions;
  for (const auto& [speaker, placement] : result->speaker_positions)
    positions[speaker] = placement.second;
  out.sidecar["positions"] = std::move(positions);
  out.sidecar["noise"] = noises.noises[noise_idx].first;
  out.sidecar["snr_db"] = snr_db;
  out.sidecar["noise_gain"] = noisy.noise_gain;
  out.sidecar["noise_offset"] = noisy.noise_offset;
  out.sidecar["rir_gains"] = std::move(gains);
  out.sidecar["mix_gain"] = mix.gain;
  out.sidecar["final_gain"] = final_gain;
  return out;
}

}  // namespace convsim

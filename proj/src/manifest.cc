// convsim/manifest.cc

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

#include "convsim/manifest.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convsim/audio.h"

namespace convsim {

namespace {

namespace fs = std::filesystem;

nlohmann::json LoadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest: " + path);
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("manifest parse error in " + path + ": " +
                             e.what());
  }
}

std::string Resolve(const std::string& manifest_path, const std::string& ref) {
  fs::path p(ref);
  if (p.is_absolute()) return p.string();
  return (fs::path(manifest_path).parent_path() / p).string();
}

// Probes a WAV header and folds its sample rate into the catalog-wide rate.
WavInfo ProbeAudio(const std::string& locator, const std::string& manifest,
                   double* rate) {
  if (!fs::exists(locator))
    throw std::runtime_error(manifest + ": missing audio file: " + locator);
  const WavInfo info = ReadWavInfo(locator);
  if (*rate == 0.0) {
    *rate = info.sample_rate;
  } else if (*rate != static_cast<double>(info.sample_rate)) {
    throw std::runtime_error(manifest + ": sample-rate mismatch: " + locator +
                             " has " + std::to_string(info.sample_rate) +
                             " Hz, expected " +
                             std::to_string(static_cast<int>(*rate)) + " Hz");
  }
  return info;
}

}  // namespace

UtterancePool LoadPool(const std::string& manifest_path) {
  const nlohmann::json doc = LoadJson(manifest_path);
  if (!doc.is_object() || doc.empty())
    throw std::runtime_error(manifest_path +
                             ": pool manifest must be a non-empty object");
  UtterancePool pool;
  for (const auto& [speaker, files] : doc.items()) {
    if (!files.is_array() || files.empty())
      throw std::runtime_error(manifest_path + ": speaker '" + speaker +
                               "' has zero utterances");
    for (const auto& f : files) {
      const auto ref = f.get<std::string>();
      UtteranceEntry entry;
      entry.ref = speaker + "/" + fs::path(ref).filename().string();
      entry.locator = Resolve(manifest_path, ref);
      const WavInfo info =
          ProbeAudio(entry.locator, manifest_path, &pool.sample_rate);
      if (info.n_samples == 0)
        throw std::runtime_error(manifest_path + ": empty audio file: " + ref);
      entry.duration =
          static_cast<double>(info.n_samples) / pool.sample_rate;
      pool.speakers[speaker].push_back(std::move(entry));
    }
  }
  return pool;
}

RirCatalog LoadRirCatalog(const std::string& manifest_path,
                          int min_positions) {
  const nlohmann::json doc = LoadJson(manifest_path);
  if (!doc.is_object() || doc.empty())
    throw std::runtime_error(manifest_path +
                             ": RIR manifest must be a non-empty object");
  RirCatalog catalog;
  for (const auto& [room, positions] : doc.items()) {
    if (!positions.is_object())
      throw std::runtime_error(manifest_path + ": room '" + room +
                               "' must map position ids to wav paths");
    if (static_cast<int>(positions.size()) < min_positions)
      throw std::runtime_error(
          manifest_path + ": room '" + room + "' has " +
          std::to_string(positions.size()) + " positions, need >= " +
          std::to_string(min_positions));
    for (const auto& [position, file] : positions.items()) {
      RirEntry entry;
      entry.position_id = position;
      entry.locator = Resolve(manifest_path, file.get<std::string>());
      ProbeAudio(entry.locator, manifest_path, &catalog.sample_rate);
      catalog.rooms[room].push_back(std::move(entry));
    }
  }
  return catalog;
}

NoiseCatalog LoadNoiseCatalog(const std::string& manifest_path) {
  const nlohmann::json doc = LoadJson(manifest_path);
  NoiseCatalog catalog;
  if (!doc.contains("noises") || !doc.at("noises").is_array() ||
      doc.at("noises").empty())
    throw std::runtime_error(manifest_path +
                             ": noise manifest needs a non-empty 'noises' "
                             "array");
  if (!doc.contains("snr_db") || !doc.at("snr_db").is_array() ||
      doc.at("snr_db").empty())
    throw std::runtime_error(manifest_path +
                             ": noise manifest needs a non-empty 'snr_db' "
                             "array");
  for (const auto& f : doc.at("noises")) {
    const auto ref = f.get<std::string>();
    const std::string locator = Resolve(manifest_path, ref);
    ProbeAudio(locator, manifest_path, &catalog.sample_rate);
    catalog.noises.emplace_back(fs::path(ref).filename().string(), locator);
  }
  catalog.snr_choices = doc.at("snr_db").get<std::vector<double>>();
  return catalog;
}

}  // namespace convsim

// convsim/rttm.cc

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

#include "convsim/rttm.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace convsim {

namespace {

std::vector<std::string> SplitWhitespace(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) fields.push_back(tok);
  return fields;
}

double ParseSeconds(const std::string& tok, const std::string& path,
                    std::size_t line_no, const char* what) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != tok.size())
    throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                             ": bad " + what + " '" + tok + "'");
  return value;
}

std::string FormatSeconds(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", t);
  return buf;
}

std::vector<Timeline> CollectTimelines(
    std::vector<std::string> order,
    std::map<std::string, std::vector<Segment>> segments_by_conv) {
  std::vector<Timeline> timelines;
  timelines.reserve(order.size());
  for (const std::string& conv : order) {
    Timeline t;
    t.conversation_id = conv;
    t.segments = std::move(segments_by_conv[conv]);
    t.SortSegments();
    timelines.push_back(std::move(t));
  }
  return timelines;
}

}  // namespace

std::vector<Timeline> ReadRttm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read RTTM file: " + path);
  std::map<std::string, std::vector<Segment>> by_conv;
  std::vector<std::string> order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitWhitespace(line);
    if (fields.empty() || fields[0] != "SPEAKER") continue;
    if (fields.size() < 8)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": SPEAKER line has " +
                               std::to_string(fields.size()) +
                               " fields (need >= 8)");
    Segment seg;
    seg.start = ParseSeconds(fields[3], path, line_no, "start time");
    seg.duration = ParseSeconds(fields[4], path, line_no, "duration");
    if (seg.start < 0.0)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": negative start time");
    if (seg.duration <= 0.0)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": non-positive duration");
    seg.speaker_id = fields[7];
    if (by_conv.find(fields[1]) == by_conv.end()) order.push_back(fields[1]);
    by_conv[fields[1]].push_back(std::move(seg));
  }
  return CollectTimelines(std::move(order), std::move(by_conv));
}

void WriteRttm(const std::vector<Timeline>& timelines,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write RTTM file: " + path);
  for (const Timeline& t : timelines) {
    for (const Segment& s : t.segments) {
      out << "SPEAKER " << t.conversation_id << " 1 "
          << FormatSeconds(s.start) << " " << FormatSeconds(s.duration)
          << " <NA> <NA> " << s.speaker_id << " <NA> <NA>\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Timeline> ReadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read CSV file: " + path);
  std::map<std::string, std::vector<Segment>> by_conv;
  std::vector<std::string> order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "conversation_id,speaker,start,duration")
        throw std::runtime_error(
            path + ": line 1: expected header "
                   "'conversation_id,speaker,start,duration'");
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() != 4)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected 4 fields, got " +
                               std::to_string(fields.size()));
    Segment seg;
    seg.speaker_id = fields[1];
    seg.start = ParseSeconds(fields[2], path, line_no, "start time");
    seg.duration = ParseSeconds(fields[3], path, line_no, "duration");
    if (seg.start < 0.0)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": negative start time");
    if (seg.duration <= 0.0)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": non-positive duration");
    if (by_conv.find(fields[0]) == by_conv.end()) order.push_back(fields[0]);
    by_conv[fields[0]].push_back(std::move(seg));
  }
  return CollectTimelines(std::move(order), std::move(by_conv));
}

void WriteCsv(const std::vector<Timeline>& timelines,
              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  out << "conversation_id,speaker,start,duration\n";
  for (const Timeline& t : timelines) {
    for (const Segment& s : t.segments) {
      out << t.conversation_id << "," << s.speaker_id << ","
          << FormatSeconds(s.start) << "," << FormatSeconds(s.duration)
          << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Timeline> ReadAnnotations(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      const std::string ext = entry.path().extension().string();
      if (ext == ".rttm" || ext == ".csv")
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw std::runtime_error("no .rttm or .csv files in directory: " + path);
    std::vector<Timeline> all;
    for (const std::string& file : files) {
      auto part = ReadAnnotations(file);
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
    return all;
  }
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".csv") return ReadCsv(path);
  return ReadRttm(path);
}

}  // namespace convsim

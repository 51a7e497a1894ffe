// convsim/timeline.cc

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

#include "convsim/timeline.h"

#include <algorithm>
#include <map>
#include <string>

namespace convsim {

void Timeline::SortSegments() {
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& a, const Segment& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.speaker_id < b.speaker_id;
                   });
}

std::vector<GapObservation> ExtractGaps(const Timeline& timeline) {
  std::vector<GapObservation> gaps;
  if (timeline.segments.size() < 2) return gaps;
  gaps.reserve(timeline.segments.size() - 1);
  for (std::size_t i = 0; i + 1 < timeline.segments.size(); ++i) {
    const Segment& prev = timeline.segments[i];
    const Segment& next = timeline.segments[i + 1];
    GapObservation g;
    g.gap = next.start - prev.End();
    g.transition = prev.speaker_id == next.speaker_id
                       ? Transition::kSameSpeaker
                       : Transition::kCrossSpeaker;
    g.from_speaker = prev.speaker_id;
    g.to_speaker = next.speaker_id;
    g.conversation_id = timeline.conversation_id;
    g.index = static_cast<int>(i);
    gaps.push_back(std::move(g));
  }
  return gaps;
}

std::vector<std::string> TurnSequence(const Timeline& timeline) {
  std::vector<std::string> seq;
  seq.reserve(timeline.segments.size());
  for (const Segment& s : timeline.segments) seq.push_back(s.speaker_id);
  return seq;
}

std::vector<std::string> Validate(const Timeline& timeline) {
  std::vector<std::string> violations;
  const auto& segs = timeline.segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string tag = "segment " + std::to_string(i);
    if (!(segs[i].duration > 0.0))
      violations.push_back(tag + ": duration must be > 0");
    if (segs[i].start < 0.0)
      violations.push_back(tag + ": start must be >= 0");
    if (i > 0 && segs[i].start < segs[i - 1].start)
      violations.push_back(tag + ": starts before segment " +
                           std::to_string(i - 1) + " (not sorted by start)");
  }

  // Same-speaker self-overlap, checked in start order.
  std::vector<std::size_t> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (segs[a].start != segs[b].start)
                       return segs[a].start < segs[b].start;
                     return segs[a].speaker_id < segs[b].speaker_id;
                   });
  std::map<std::string, std::pair<double, std::size_t>> last_end;
  for (std::size_t k : order) {
    auto it = last_end.find(segs[k].speaker_id);
    if (it != last_end.end() && segs[k].start < it->second.first - 1e-12) {
      violations.push_back("segment " + std::to_string(k) +
                           ": overlaps segment " +
                           std::to_string(it->second.second) +
                           " of same speaker '" + segs[k].speaker_id + "'");
    }
    if (it == last_end.end() || segs[k].End() > it->second.first)
      last_end[segs[k].speaker_id] = {segs[k].End(), k};
  }
  return violations;
}

}  // namespace convsim

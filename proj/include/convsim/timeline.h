// convsim/timeline.h

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

#ifndef CONVSIM_TIMELINE_H_
#define CONVSIM_TIMELINE_H_

#include <optional>
#include <string>
#include <vector>

namespace convsim {

// One speaker-attributed speech segment. Times are seconds; duration > 0,
// start >= 0.
struct Segment {
  std::string speaker_id;
  double start = 0.0;
  double duration = 0.0;
  std::string utterance_ref;  // optional source identifier, "" when unset

  double End() const { return start + duration; }
};

enum class Transition { kSameSpeaker, kCrossSpeaker };

// Signed gap between two consecutive segments. Negative means the next
// segment starts before the previous one ends (overlap).
struct GapObservation {
  double gap = 0.0;
  Transition transition = Transition::kCrossSpeaker;
  std::string from_speaker;
  std::string to_speaker;
  std::string conversation_id;
  int index = 0;  // ordinal position in the conversation's gap sequence
};

// Ordered segments of one conversation. Segments are kept sorted by start
// time, ties broken by speaker id; a speaker's own segments never overlap.
struct Timeline {
  std::string conversation_id;
  std::vector<Segment> segments;
  std::optional<double> sample_rate_hint;

  // Enforces the canonical (start, speaker_id) ordering.
  void SortSegments();
};

// Signed gaps between consecutive segments in start order, one per adjacent
// pair, indexed from 0. Fewer than two segments gives an empty list.
std::vector<GapObservation> ExtractGaps(const Timeline& timeline);

// Speaker label of each segment in start order.
std::vector<std::string> TurnSequence(const Timeline& timeline);

// Descriptions of every invariant violation; empty when the timeline is
// valid. Each message names the offending segment index and the rule.
std::vector<std::string> Validate(const Timeline& timeline);

}  // namespace convsim

#endif  // CONVSIM_TIMELINE_H_

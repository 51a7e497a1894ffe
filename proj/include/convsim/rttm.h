// convsim/rttm.h

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

#ifndef CONVSIM_RTTM_H_
#define CONVSIM_RTTM_H_

#include <string>
#include <vector>

#include "convsim/timeline.h"

namespace convsim {

// Reads RTTM speaker lines
//   SPEAKER <file> <chan> <tbeg> <tdur> <ortho> <stype> <name> <conf> <slat>
// into one Timeline per distinct <file> field, in first-appearance order.
// Non-SPEAKER lines are ignored. Malformed numeric fields and non-positive
// durations raise an error naming the line number.
std::vector<Timeline> ReadRttm(const std::string& path);

// Writes SPEAKER lines with 3-decimal seconds. Reading the result back
// reproduces the input within 1e-3 s.
void WriteRttm(const std::vector<Timeline>& timelines,
               const std::string& path);

// CSV alternative with header `conversation_id,speaker,start,duration`,
// UTF-8, '.' decimal separator. Same semantics as RTTM.
std::vector<Timeline> ReadCsv(const std::string& path);
void WriteCsv(const std::vector<Timeline>& timelines, const std::string& path);

// Dispatches on extension (.rttm/.csv). For a directory, reads every
// *.rttm and *.csv inside in lexicographic filename order.
std::vector<Timeline> ReadAnnotations(const std::string& path);

}  // namespace convsim

#endif  // CONVSIM_RTTM_H_

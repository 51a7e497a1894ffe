// convsim/audio.cc

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

#include "convsim/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace convsim {

namespace {

struct FmtChunk {
  uint16_t audio_format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
};

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void PutU32(std::ofstream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void PutU16(std::ofstream& out, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

// Walks the RIFF chunk list; returns the fmt fields and the offset/size of
// the data chunk.
void ParseWavHeader(std::ifstream& in, const std::string& path, FmtChunk* fmt,
                    std::streamoff* data_offset, uint32_t* data_size) {
  unsigned char hdr[12];
  in.read(reinterpret_cast<char*>(hdr), 12);
  if (!in || std::memcmp(hdr, "RIFF", 4) != 0 ||
      std::memcmp(hdr + 8, "WAVE", 4) != 0)
    throw std::runtime_error(path + ": not a RIFF/WAVE file");

  bool have_fmt = false, have_data = false;
  while (!have_fmt || !have_data) {
    unsigned char chunk[8];
    in.read(reinterpret_cast<char*>(chunk), 8);
    if (!in) break;
    const uint32_t size = ReadU32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw std::runtime_error(path + ": short fmt chunk");
      unsigned char body[16];
      in.read(reinterpret_cast<char*>(body), 16);
      if (!in) throw std::runtime_error(path + ": truncated fmt chunk");
      fmt->audio_format = ReadU16(body);
      fmt->channels = ReadU16(body + 2);
      fmt->sample_rate = ReadU32(body + 4);
      fmt->bits_per_sample = ReadU16(body + 14);
      in.seekg(size - 16 + (size & 1), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      *data_offset = in.tellg();
      *data_size = size;
      in.seekg(size + (size & 1), std::ios::cur);
      have_data = true;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || !have_data)
    throw std::runtime_error(path + ": missing fmt or data chunk");
  if (fmt->audio_format != 1 || fmt->bits_per_sample != 16)
    throw std::runtime_error(path + ": PCM16 required");
  if (fmt->channels != 1) throw std::runtime_error(path + ": mono required");
}

}  // namespace

WavInfo ReadWavInfo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read WAV file: " + path);
  FmtChunk fmt;
  std::streamoff data_offset = 0;
  uint32_t data_size = 0;
  ParseWavHeader(in, path, &fmt, &data_offset, &data_size);
  WavInfo info;
  info.sample_rate = fmt.sample_rate;
  info.n_samples = data_size / 2;
  return info;
}

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read WAV file: " + path);
  FmtChunk fmt;
  std::streamoff data_offset = 0;
  uint32_t data_size = 0;
  ParseWavHeader(in, path, &fmt, &data_offset, &data_size);

  in.clear();
  in.seekg(data_offset);
  std::vector<unsigned char> raw(data_size);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(data_size));
  if (!in) throw std::runtime_error(path + ": truncated data chunk");

  AudioBuffer buf;
  buf.sample_rate = fmt.sample_rate;
  buf.samples.resize(data_size / 2);
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    const auto q = static_cast<int16_t>(
        static_cast<uint16_t>(raw[2 * i] | raw[2 * i + 1] << 8));
    buf.samples[i] = std::clamp(q / 32767.0, -1.0, 1.0);
  }
  return buf;
}

void WriteWav(const AudioBuffer& buffer, const std::string& path) {
  if (!(buffer.sample_rate > 0.0))
    throw std::runtime_error("write_wav: sample rate must be > 0");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write WAV file: " + path);

  const auto n = static_cast<uint32_t>(buffer.samples.size());
  const uint32_t data_size = n * 2;
  const auto rate = static_cast<uint32_t>(std::llround(buffer.sample_rate));

  out.write("RIFF", 4);
  PutU32(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, 1);  // mono
  PutU32(out, rate);
  PutU32(out, rate * 2);  // byte rate
  PutU16(out, 2);         // block align
  PutU16(out, 16);        // bits per sample
  out.write("data", 4);
  PutU32(out, data_size);

  std::vector<unsigned char> raw(data_size);
  for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
    const double x = std::clamp(buffer.samples[i], -1.0, 1.0);
    const auto q = static_cast<int16_t>(std::lround(x * 32767.0));
    raw[2 * i] = static_cast<unsigned char>(q & 0xFF);
    raw[2 * i + 1] = static_cast<unsigned char>((q >> 8) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace convsim

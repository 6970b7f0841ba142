// core/src/wave.cc

// Copyright 2026  The Defake Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "defake/wave.h"

#include <cmath>
#include <cstring>

#include "defake/error.h"
#include "defake/util.h"

namespace defake {

namespace {

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) |
         (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(
      static_cast<std::uint16_t>(b[off]) |
      (static_cast<std::uint16_t>(b[off + 1]) << 8));
}

void PutU32(std::vector<std::uint8_t>* out, std::uint32_t v) {
  out->push_back(static_cast<std::uint8_t>(v & 0xff));
  out->push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out->push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out->push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void PutU16(std::vector<std::uint8_t>* out, std::uint16_t v) {
  out->push_back(static_cast<std::uint8_t>(v & 0xff));
  out->push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t off, const char* tag) {
  return b.size() >= off + 4 && std::memcmp(b.data() + off, tag, 4) == 0;
}

}  // namespace

Waveform DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kCorruptHeader, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;

  // Walk the chunk list; unknown chunks are skipped.  Chunks are word
  // aligned: odd sizes carry one pad byte.
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = ReadU32(bytes, off + 4);
    const std::size_t body = off + 8;
    if (body + chunk_size > bytes.size()) {
      throw Error(ErrorCode::kCorruptHeader, "chunk overruns file end");
    }
    if (TagIs(bytes, off, "fmt ")) {
      if (chunk_size < 16) {
        throw Error(ErrorCode::kCorruptHeader, "fmt chunk too short");
      }
      format = ReadU16(bytes, body + 0);
      channels = ReadU16(bytes, body + 2);
      rate = ReadU32(bytes, body + 4);
      bits = ReadU16(bytes, body + 14);
      have_fmt = true;
    } else if (TagIs(bytes, off, "data")) {
      data = bytes.subspan(body, chunk_size);
    }
    off = body + chunk_size + (chunk_size % 2);
  }

  if (!have_fmt || data.data() == nullptr) {
    throw Error(ErrorCode::kCorruptHeader, "missing fmt or data chunk");
  }
  if (format != 1) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only integer PCM is supported (format tag " +
                    std::to_string(format) + ")");
  }
  if (channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat,
                std::to_string(channels) + " channels; only mono is supported");
  }
  if (bits != 16) {
    throw Error(ErrorCode::kUnsupportedFormat,
                std::to_string(bits) + "-bit; only 16-bit is supported");
  }
  if (rate == 0) {
    throw Error(ErrorCode::kCorruptHeader, "zero sample rate");
  }
  if (data.size() % 2 != 0) {
    throw Error(ErrorCode::kCorruptHeader, "odd data chunk size");
  }

  Waveform w;
  w.sample_rate_hz = static_cast<int>(rate);
  w.samples.resize(data.size() / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const std::int16_t s = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(data[2 * i]) |
        (static_cast<std::uint16_t>(data[2 * i + 1]) << 8));
    w.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return w;
}

std::vector<std::uint8_t> EncodeWav(const Waveform& w) {
  if (w.samples.empty()) {
    throw Error(ErrorCode::kEmptyInput, "refusing to encode empty waveform");
  }
  if (w.sample_rate_hz <= 0) {
    throw Error(ErrorCode::kBadArgument, "non-positive sample rate");
  }
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(w.samples.size() * 2);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, 1);  // integer PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<std::uint32_t>(w.sample_rate_hz));
  PutU32(&out, static_cast<std::uint32_t>(w.sample_rate_hz) * 2);
  PutU16(&out, 2);   // block align
  PutU16(&out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, data_size);

  for (const double x : w.samples) {
    long v = std::lround(x * 32768.0);
    if (v > 32767) v = 32767;
    if (v < -32768) v = -32768;
    const std::int16_t s = static_cast<std::int16_t>(v);
    PutU16(&out, static_cast<std::uint16_t>(s));
  }
  return out;
}

Waveform LoadWav(const std::string& path) {
  const std::string content = ReadFileToString(path);
  return DecodeWav(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(content.data()), content.size()));
}

void SaveWav(const std::string& path, const Waveform& w) {
  const std::vector<std::uint8_t> bytes = EncodeWav(w);
  WriteFileAtomic(path,
                  std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                   bytes.size()));
}

std::size_t ClipToUnit(Waveform* w) {
  std::size_t clipped = 0;
  for (double& x : w->samples) {
    if (x > 1.0) {
      x = 1.0;
      ++clipped;
    } else if (x < -1.0) {
      x = -1.0;
      ++clipped;
    }
  }
  return clipped;
}

}  // namespace defake

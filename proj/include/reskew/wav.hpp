// Copyright 2026 The reskew Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal RIFF/WAVE reader and writer for mono audio. Reads integer PCM
// (8/16/24/32-bit) and IEEE float (32/64-bit), including the extensible
// header; writes 16-bit PCM or 32-bit float.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "reskew/error.hpp"
#include "reskew/signal.hpp"

namespace reskew {

enum class WavEncoding { kPcm16, kFloat32 };

namespace detail {

inline std::uint32_t read_le(const unsigned char* p, int bytes) {
  std::uint32_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline void put_le(std::vector<unsigned char>& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

}  // namespace detail

inline Signal decode_wav(const std::vector<unsigned char>& bytes,
                         const std::string& name = "<memory>") {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kFormat, name + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }
  int format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = detail::read_le(chunk + 4, 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw fail("truncated fmt chunk");
      format = static_cast<int>(detail::read_le(chunk + 8, 2));
      channels = static_cast<int>(detail::read_le(chunk + 10, 2));
      rate = detail::read_le(chunk + 12, 4);
      bits = static_cast<int>(detail::read_le(chunk + 22, 2));
      if (format == 0xFFFE) {
        if (size < 40) throw fail("truncated extensible fmt chunk");
        format = static_cast<int>(detail::read_le(chunk + 32, 2));
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Streams written without a final size report 0 or 0xFFFFFFFF.
      data_size = (size == 0 || size > avail) ? avail : size;
    }
    pos = body + size + (size & 1);
  }
  if (format == 0) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  if (channels != 1) {
    throw fail("expected mono audio, got " + std::to_string(channels) + " channels");
  }
  if (rate == 0 || rate > 0x7FFFFFFF) throw fail("bad sample rate");

  const int width = bits / 8;
  if (width <= 0 || bits % 8 != 0) throw fail("unsupported bit depth");
  const std::size_t count = data_size / static_cast<std::size_t>(width);
  std::vector<double> samples(count);
  if (format == 1) {
    if (width > 4) throw fail("unsupported PCM width");
    const double scale = std::ldexp(1.0, -(bits - 1));
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t raw = detail::read_le(data + i * width, width);
      std::int64_t v;
      if (width == 1) {
        v = static_cast<std::int64_t>(raw) - 128;  // 8-bit PCM is unsigned
      } else {
        const std::uint32_t sign = 1u << (bits - 1);
        v = (raw & sign) ? static_cast<std::int64_t>(raw) - (std::int64_t{1} << bits)
                         : static_cast<std::int64_t>(raw);
      }
      samples[i] = static_cast<double>(v) * scale;
    }
  } else if (format == 3 && width == 4) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t raw = detail::read_le(data + i * 4, 4);
      float f;
      std::memcpy(&f, &raw, 4);
      samples[i] = f;
    }
  } else if (format == 3 && width == 8) {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t raw = 0;
      for (int b = 7; b >= 0; --b) raw = (raw << 8) | data[i * 8 + b];
      double d;
      std::memcpy(&d, &raw, 8);
      samples[i] = d;
    }
  } else {
    throw fail("unsupported WAV format tag " + std::to_string(format));
  }
  return Signal(std::move(samples), static_cast<int>(rate));
}

inline Signal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_wav(bytes, path.string());
}

/// PCM16 output is clipped to [-1, 1] and rounded half away from zero, so
/// x and -x encode to exact negations of each other.
inline std::vector<unsigned char> encode_wav(const Signal& s, WavEncoding enc) {
  const int width = enc == WavEncoding::kPcm16 ? 2 : 4;
  const std::uint32_t data_size = static_cast<std::uint32_t>(s.size() * width);
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  detail::put_le(out, 36 + data_size, 4);
  tag("WAVE");
  tag("fmt ");
  detail::put_le(out, 16, 4);
  detail::put_le(out, enc == WavEncoding::kPcm16 ? 1 : 3, 2);
  detail::put_le(out, 1, 2);
  detail::put_le(out, static_cast<std::uint32_t>(s.sample_rate()), 4);
  detail::put_le(out, static_cast<std::uint32_t>(s.sample_rate() * width), 4);
  detail::put_le(out, static_cast<std::uint32_t>(width), 2);
  detail::put_le(out, static_cast<std::uint32_t>(8 * width), 2);
  tag("data");
  detail::put_le(out, data_size, 4);
  for (double v : s.samples()) {
    if (enc == WavEncoding::kPcm16) {
      const double c = std::fmax(-1.0, std::fmin(1.0, v));
      const auto q = static_cast<std::int16_t>(std::lround(c * 32767.0));
      detail::put_le(out, static_cast<std::uint16_t>(q), 2);
    } else {
      const float f = static_cast<float>(v);
      std::uint32_t raw;
      std::memcpy(&raw, &f, 4);
      detail::put_le(out, raw, 4);
    }
  }
  return out;
}

inline void write_wav(const std::filesystem::path& path, const Signal& s,
                      WavEncoding enc = WavEncoding::kPcm16) {
  const auto bytes = encode_wav(s, enc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace reskew

// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "docslim/errors.hpp"

namespace docslim {

/// L x D row-major matrix of token embeddings (32-bit floats, all finite).
struct TokenMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<float> data;  // rows * cols

  float* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
  const float* row(int i) const {
    return data.data() + static_cast<std::size_t>(i) * cols;
  }
  float& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  float at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
};

inline TokenMatrix make_tokens(int rows, int cols, float fill = 0.0f) {
  TokenMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.data.assign(static_cast<std::size_t>(rows) * cols, fill);
  return m;
}

inline void validate(const TokenMatrix& m, const std::string& who = "TokenMatrix") {
  if (m.rows < 1 || m.cols < 1) {
    throw Error(who + ": dimensions must be at least 1x1");
  }
  if (m.data.size() != static_cast<std::size_t>(m.rows) * m.cols) {
    throw ShapeMismatch(who + ": data length does not match L*D");
  }
  for (const float v : m.data) {
    if (!std::isfinite(v)) throw Error(who + ": entries must be finite");
  }
}

// ---------------------------------------------------------------------------
// DSTK binary format: magic "DSTK", then version, L, D as little-endian u32,
// then L*D IEEE-754 32-bit floats, little-endian, row-major.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kDstkVersion = 1;
inline constexpr std::size_t kDstkHeaderBytes = 16;

namespace detail {

inline void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::string read_file_bytes(const std::filesystem::path& path,
                                   const char* who) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string(who) + ": cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(std::string(who) + ": read failed " + path.string());
  return bytes;
}

}  // namespace detail

inline void write_dstk(const std::filesystem::path& path, const TokenMatrix& m) {
  validate(m, "write_dstk");
  std::string bytes;
  bytes.reserve(kDstkHeaderBytes + m.data.size() * 4);
  bytes.append("DSTK", 4);
  detail::put_u32le(bytes, kDstkVersion);
  detail::put_u32le(bytes, static_cast<std::uint32_t>(m.rows));
  detail::put_u32le(bytes, static_cast<std::uint32_t>(m.cols));
  for (const float v : m.data) {
    detail::put_u32le(bytes, std::bit_cast<std::uint32_t>(v));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("write_dstk: cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write_dstk: write failed " + path.string());
}

inline TokenMatrix read_dstk(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path, "read_dstk");
  if (bytes.size() < kDstkHeaderBytes) {
    throw FormatError("read_dstk: " + path.string() + ": expected at least " +
                      std::to_string(kDstkHeaderBytes) + " header bytes, got " +
                      std::to_string(bytes.size()));
  }
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::memcmp(p, "DSTK", 4) != 0) {
    throw FormatError("read_dstk: " + path.string() + ": bad magic");
  }
  const std::uint32_t version = detail::get_u32le(p + 4);
  if (version != kDstkVersion) {
    throw FormatError("read_dstk: " + path.string() + ": unsupported version " +
                      std::to_string(version));
  }
  const std::uint32_t rows = detail::get_u32le(p + 8);
  const std::uint32_t cols = detail::get_u32le(p + 12);
  if (rows < 1 || cols < 1 || rows > 0x7fffffffu || cols > 0x7fffffffu) {
    throw FormatError("read_dstk: " + path.string() + ": bad shape " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  const std::uint64_t expected = kDstkHeaderBytes + count * 4;
  if (bytes.size() != expected) {
    throw FormatError("read_dstk: " + path.string() + ": expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  TokenMatrix m;
  m.rows = static_cast<int>(rows);
  m.cols = static_cast<int>(cols);
  m.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    m.data[i] =
        std::bit_cast<float>(detail::get_u32le(p + kDstkHeaderBytes + i * 4));
  }
  for (const float v : m.data) {
    if (!std::isfinite(v)) {
      throw FormatError("read_dstk: " + path.string() + ": non-finite entry");
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// CSV: one token per line, comma-separated decimal floats.
// ---------------------------------------------------------------------------

inline TokenMatrix read_token_csv(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path, "read_token_csv");
  TokenMatrix m;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) eol = bytes.size();
    std::size_t end = eol;
    if (end > pos && bytes[end - 1] == '\r') --end;
    ++line_no;
    if (end > pos) {
      int cols = 0;
      std::size_t cur = pos;
      while (cur <= end) {
        std::size_t comma = bytes.find(',', cur);
        if (comma == std::string::npos || comma > end) comma = end;
        float v = 0.0f;
        const char* first = bytes.data() + cur;
        const char* last = bytes.data() + comma;
        while (first < last && (*first == ' ' || *first == '\t')) ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
          throw FormatError("read_token_csv: " + path.string() + ": line " +
                            std::to_string(line_no) + ": bad value");
        }
        m.data.push_back(v);
        ++cols;
        if (comma == end) break;
        cur = comma + 1;
      }
      if (m.rows == 0) {
        m.cols = cols;
      } else if (cols != m.cols) {
        throw FormatError("read_token_csv: " + path.string() + ": line " +
                          std::to_string(line_no) + ": expected " +
                          std::to_string(m.cols) + " values, got " +
                          std::to_string(cols));
      }
      ++m.rows;
    }
    pos = eol + 1;
  }
  if (m.rows < 1 || m.cols < 1) {
    throw FormatError("read_token_csv: " + path.string() + ": no data rows");
  }
  return m;
}

inline void write_token_csv(const std::filesystem::path& path,
                            const TokenMatrix& m) {
  validate(m, "write_token_csv");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("write_token_csv: cannot open " + path.string());
  char buf[48];
  for (int i = 0; i < m.rows; ++i) {
    const float* r = m.row(i);
    for (int j = 0; j < m.cols; ++j) {
      // 9 significant digits round-trips binary32 exactly.
      const int n = std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(r[j]));
      if (j) out.put(',');
      out.write(buf, n);
    }
    out.put('\n');
  }
  if (!out) throw IoError("write_token_csv: write failed " + path.string());
}

/// Dispatch on extension: ".csv" is text, everything else DSTK binary.
inline TokenMatrix read_tokens_auto(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_token_csv(path);
  return read_dstk(path);
}

}  // namespace docslim

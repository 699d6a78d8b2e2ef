// src/matrix_io.cpp

// Copyright 2026  The mbnspk Authors

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

#include "mbnspk/matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace mbnspk {

namespace {

constexpr char kMatrixMagic[] = "MBNMAT1";  // 7 bytes on disk
constexpr char kIndexMagic[] = "MBNIDX1";
constexpr std::size_t kMagicLen = 7;

template <typename T>
T ToLittle(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <typename T>
void WritePod(std::ostream &os, T v) {
  v = ToLittle(v);
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream &is, const std::filesystem::path &path) {
  T v{};
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(T)))
    throw ValidationError("truncated file " + path.string());
  return ToLittle(v);
}

std::ofstream OpenOut(const std::filesystem::path &path, std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode);
  if (!os) throw RuntimeFailure("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream OpenIn(const std::filesystem::path &path, std::ios::openmode mode) {
  if (!std::filesystem::exists(path))
    throw ValidationError("file not found: " + path.string());
  std::ifstream is(path, mode);
  if (!is) throw ValidationError("cannot open " + path.string());
  return is;
}

void ReadHeader(std::istream &is, const char *magic, const std::filesystem::path &path,
                std::uint64_t *rows, std::uint64_t *cols) {
  char buf[kMagicLen];
  if (!is.read(buf, kMagicLen) || std::memcmp(buf, magic, kMagicLen) != 0)
    throw ValidationError("malformed header in " + path.string() + " (expected " + magic + ")");
  *rows = ReadPod<std::uint64_t>(is, path);
  *cols = ReadPod<std::uint64_t>(is, path);
}

}  // namespace

void SaveMatrixBinary(const std::filesystem::path &path, const Matrix &m) {
  std::ofstream os = OpenOut(path, std::ios::binary | std::ios::trunc);
  os.write(kMatrixMagic, kMagicLen);
  WritePod<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  WritePod<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char *>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    for (Eigen::Index i = 0; i < m.size(); ++i) WritePod(os, m.data()[i]);
  }
  if (!os) throw RuntimeFailure("write failed: " + path.string());
}

Matrix LoadMatrixBinary(const std::filesystem::path &path) {
  std::ifstream is = OpenIn(path, std::ios::binary);
  std::uint64_t rows = 0, cols = 0;
  ReadHeader(is, kMatrixMagic, path, &rows, &cols);
  const auto expected = kMagicLen + 16 + rows * cols * sizeof(double);
  if (std::filesystem::file_size(path) != expected)
    throw ValidationError("size mismatch in " + path.string() + ": header says " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = ReadPod<double>(is, path);
  return m;
}

void SaveMatrixCsv(const std::filesystem::path &path, const Matrix &m) {
  std::ofstream os = OpenOut(path, std::ios::trunc);
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j > 0) os << ',';
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw RuntimeFailure("write failed: " + path.string());
}

Matrix LoadMatrixCsv(const std::filesystem::path &path) {
  std::ifstream is = OpenIn(path, std::ios::in);
  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t count = 0;
    const char *p = line.data();
    const char *end = line.data() + line.size();
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        // from_chars rejects "nan"/"inf" spellings with a sign; try strtod.
        std::string field(p, std::find(p, end, ','));
        char *stop = nullptr;
        v = std::strtod(field.c_str(), &stop);
        if (field.empty() || stop != field.c_str() + field.size())
          throw ValidationError("unparsable value in " + path.string() + " at row " +
                                std::to_string(line_no) + ", column " + std::to_string(count + 1));
        next = p + field.size();
      }
      values.push_back(v);
      ++count;
      p = next;
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      if (*p != ',')
        throw ValidationError("unexpected character in " + path.string() + " at row " +
                              std::to_string(line_no));
      ++p;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ValidationError("ragged row " + std::to_string(line_no) + " in " + path.string() +
                            ": " + std::to_string(count) + " columns, expected " +
                            std::to_string(cols));
    }
    ++rows;
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

void SaveMatrix(const std::filesystem::path &path, const Matrix &m, MatrixFormat format) {
  if (format == MatrixFormat::kBinary) {
    SaveMatrixBinary(path, m);
  } else {
    SaveMatrixCsv(path, m);
  }
}

Matrix LoadMatrix(const std::filesystem::path &path) {
  std::ifstream is = OpenIn(path, std::ios::binary);
  char buf[kMagicLen] = {};
  is.read(buf, kMagicLen);
  if (is.gcount() == static_cast<std::streamsize>(kMagicLen) &&
      std::memcmp(buf, kMatrixMagic, kMagicLen) == 0)
    return LoadMatrixBinary(path);
  return LoadMatrixCsv(path);
}

MatrixFormat FormatForPath(const std::filesystem::path &path) {
  const auto ext = path.extension().string();
  return (ext == ".csv" || ext == ".txt") ? MatrixFormat::kCsv : MatrixFormat::kBinary;
}

void SaveIndexMatrix(const std::filesystem::path &path, std::size_t rows, std::size_t cols,
                     std::span<const std::uint32_t> values) {
  if (values.size() != rows * cols)
    throw ValidationError("index matrix size mismatch for " + path.string());
  std::ofstream os = OpenOut(path, std::ios::binary | std::ios::trunc);
  os.write(kIndexMagic, kMagicLen);
  WritePod<std::uint64_t>(os, rows);
  WritePod<std::uint64_t>(os, cols);
  for (std::uint32_t v : values) WritePod(os, v);
  if (!os) throw RuntimeFailure("write failed: " + path.string());
}

std::vector<std::uint32_t> LoadIndexMatrix(const std::filesystem::path &path, std::size_t *rows,
                                           std::size_t *cols) {
  std::ifstream is = OpenIn(path, std::ios::binary);
  std::uint64_t r = 0, c = 0;
  ReadHeader(is, kIndexMagic, path, &r, &c);
  if (std::filesystem::file_size(path) != kMagicLen + 16 + r * c * sizeof(std::uint32_t))
    throw ValidationError("size mismatch in " + path.string());
  std::vector<std::uint32_t> values(r * c);
  for (auto &v : values) v = ReadPod<std::uint32_t>(is, path);
  *rows = r;
  *cols = c;
  return values;
}

}  // namespace mbnspk

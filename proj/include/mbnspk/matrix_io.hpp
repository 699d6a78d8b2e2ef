// mbnspk/matrix_io.hpp

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

#ifndef MBNSPK_MATRIX_IO_HPP_
#define MBNSPK_MATRIX_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mbnspk/common.hpp"

namespace mbnspk {

enum class MatrixFormat { kBinary, kCsv };

/// Binary container: "MBNMAT1", u64 rows, u64 cols (little-endian), then
/// rows*cols row-major little-endian float64.
void SaveMatrixBinary(const std::filesystem::path &path, const Matrix &m);
Matrix LoadMatrixBinary(const std::filesystem::path &path);

/// CSV: one row per line, no header, 17 significant digits.
void SaveMatrixCsv(const std::filesystem::path &path, const Matrix &m);
Matrix LoadMatrixCsv(const std::filesystem::path &path);

void SaveMatrix(const std::filesystem::path &path, const Matrix &m, MatrixFormat format);

/// Sniffs the magic string; anything else is parsed as CSV.
Matrix LoadMatrix(const std::filesystem::path &path);

/// Format implied by the extension: ".csv"/".txt" -> CSV, everything else binary.
MatrixFormat FormatForPath(const std::filesystem::path &path);

/// Index lists: "MBNIDX1", u64 rows, u64 cols, then row-major little-endian u32.
void SaveIndexMatrix(const std::filesystem::path &path, std::size_t rows, std::size_t cols,
                     std::span<const std::uint32_t> values);
std::vector<std::uint32_t> LoadIndexMatrix(const std::filesystem::path &path,
                                           std::size_t *rows, std::size_t *cols);

}  // namespace mbnspk

#endif  // MBNSPK_MATRIX_IO_HPP_

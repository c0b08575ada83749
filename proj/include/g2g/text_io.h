//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TEXT_IO_H_
#define G2G_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace g2g {

/// Writes `data` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view data);

/// Whole file contents; throws DataError when the file cannot be read.
std::string read_file(const std::filesystem::path &path);

}  // namespace g2g

#endif  // G2G_TEXT_IO_H_

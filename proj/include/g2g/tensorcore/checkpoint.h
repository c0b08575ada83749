//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TENSORCORE_CHECKPOINT_H_
#define G2G_TENSORCORE_CHECKPOINT_H_

#include <filesystem>
#include <span>
#include <string>

#include "g2g/tensorcore/params.h"

namespace g2g {

// Layout: "VJTNN1", u32 metadata length, metadata text, u32 entry count,
// entries of (u16 name length, name, u32 rank, u32 dims..., u64 byte
// offset), then little-endian float32 data. Offsets are relative to the
// start of the data block. Each parameter contributes its value and its
// two Adam moments ("<name>@adam_m", "<name>@adam_v"); each store's Adam
// step count is the single-element entry "@adam_step:<store label>".

/// Serializes the stores with free-form metadata (e.g. a JSON document).
/// Parameter names must be unique across stores.
std::string encode_checkpoint(std::span<const ParamStore *const> stores,
                              const std::string &metadata);

/// Metadata of a checkpoint without touching parameters.
std::string checkpoint_metadata(const std::string &bytes);

/// Loads values and moments into existing stores whose parameter names
/// and shapes must match the file. Entries no store claims are an error
/// unless `allow_extra`. Returns the metadata.
std::string decode_checkpoint(const std::string &bytes,
                              std::span<ParamStore *const> stores,
                              bool allow_extra = false);

/// Atomic write (temporary file, then rename).
void save_checkpoint(const std::filesystem::path &path,
                     std::span<const ParamStore *const> stores,
                     const std::string &metadata);
std::string load_checkpoint(const std::filesystem::path &path,
                            std::span<ParamStore *const> stores,
                            bool allow_extra = false);

}  // namespace g2g

#endif  // G2G_TENSORCORE_CHECKPOINT_H_

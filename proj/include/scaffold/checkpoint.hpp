#pragma once

#include <string>

#include "scaffold/autodiff.hpp"

namespace scaffold {

// Flat binary parameter archive:
//   magic "SSCK" | u32 version | u64 meta_len | meta (UTF-8)
//   u64 count | per entry: u32 name_len, name, u32 rank, u64 dims[rank],
//   little-endian f64 payload.
// Round-trips bit-exactly. `meta` is an opaque string the model layer uses
// for config/vocab/label inventories.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const ParameterStore& store,
                     const std::string& meta);

// Loads into `store`: parameters must already exist with matching shapes
// (the caller rebuilds the model from the meta first; see read_checkpoint_meta).
void load_checkpoint(const std::string& path, ParameterStore& store);

// Reads just the meta string, verifying magic and version.
std::string read_checkpoint_meta(const std::string& path);

}  // namespace scaffold

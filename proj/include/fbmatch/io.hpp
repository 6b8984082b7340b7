#pragma once

#include <filesystem>

#include "fbmatch/tensor.hpp"

namespace fbmatch {

// FBT tensor container, little-endian:
//
//   offset  size  field
//   0       4     magic "FBT1"
//   4       1     dtype code (1 = f32)
//   5       4     rank, u32 (always 3)
//   9       12    dims H, W, C as u32
//   21      ...   H*W*C f32 payload, row-major, channel-fastest
//
// The header is exactly 21 bytes for rank 3. save/load round-trip
// bit-exactly.
Tensor3 load_tensor(const std::filesystem::path& path);
void save_tensor(const Tensor3& t, const std::filesystem::path& path);

// Masks travel as binary PGM ("P5"), maxval 255 or 65535. 16-bit samples
// are big-endian per the PGM convention; gray values are object ids.
ObjectMask load_mask(const std::filesystem::path& path);
void save_mask(const ObjectMask& m, const std::filesystem::path& path);

}  // namespace fbmatch

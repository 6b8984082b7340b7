#pragma once

#include "fbmatch/tensor.hpp"

namespace fbmatch {

// Bilinear resize on a half-pixel-centered sample grid:
//   src = (dst + 0.5) * (in / out) - 0.5, clamped to the frame.
// Matching output dims is the identity (bitwise).
Tensor3 resize_bilinear(const Tensor3& t, int out_h, int out_w);

// Nearest-neighbor resize at the same grid centers. An exact half-way tie
// resolves to the smaller source index (first in row-major order), so
// results are deterministic across platforms.
ObjectMask resize_nearest(const ObjectMask& m, int out_h, int out_w);

// Integer-factor downsampling to ceil(in / factor); embeddings go through
// resize_bilinear, masks through resize_nearest. factor == 1 is the identity.
Tensor3 downsample_embedding(const Tensor3& e, int factor);
ObjectMask downsample_mask(const ObjectMask& m, int factor);

Tensor3 flip_horizontal(const Tensor3& t);
ObjectMask flip_horizontal(const ObjectMask& m);

}  // namespace fbmatch

#pragma once

#include <cstdint>
#include <vector>

#include "fbmatch/tensor.hpp"

namespace fbmatch {

// Parameters of the balanced random crop. A draw first scales the frames
// by a uniform factor from scale_range, then places the window uniformly;
// it is accepted when the first frame's window holds at least
// min_fg_pixels labelled pixels. min_fg_pixels < 0 selects the default of
// 1% of the window area (at least 1).
struct CropConfig {
    int window_h = 465;
    int window_w = 465;
    int min_fg_pixels = -1;
    int max_retries = 50;
    double scale_lo = 1.0;
    double scale_hi = 1.3;
};

// Index of the reference frame plus the consecutive training window.
struct ClipSample {
    int ref_index = 0;
    std::vector<int> sequence;  // N+1 strictly consecutive frame indices
};

// Applies one accepted (scale, window) pair identically to every frame:
// embeddings are rescaled bilinearly, masks nearest-neighbor, then both
// are cropped. Only the first frame is tested against the foreground
// threshold. Deterministic for a given seed: each retry redraws scale and
// position from the same generator.
// Throws EmptyInput for an empty sequence, WindowTooLarge when the window
// cannot fit a scaled frame, MaxRetriesExceeded after max_retries
// rejected draws.
FrameSequence balanced_random_crop(const FrameSequence& frames,
                                   const CropConfig& cfg, std::uint64_t seed);

// Uniformly draws a reference frame and the start of an (n+1)-frame
// consecutive window from a video of video_len frames.
// Throws VideoTooShort when video_len < n + 1.
ClipSample sample_clip(int video_len, int n, std::uint64_t seed);

}  // namespace fbmatch

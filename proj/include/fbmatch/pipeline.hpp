#pragma once

#include <vector>

#include "fbmatch/matching.hpp"
#include "fbmatch/tensor.hpp"

namespace fbmatch {

// One matching scale: embeddings of `channels` channels at 1/stride
// resolution, matched with `windows` and `atrous` thinning.
struct ScaleSpec {
    int stride = 4;
    int channels = 32;
    WindowSet windows;
    AtrousSpec atrous;
};

// Reference / previous / current frames of one scale. The previous mask
// holds hard labels; per-object soft probabilities are derived as {0,1}.
struct FrameTriplet {
    Frame ref;
    Frame prev;
    Tensor3 cur;
};

// Per-object feature stack handed to a downstream decoder. Channel layout
// is fixed:
//   [0, C)            current-frame embedding
//   [C, 2C)           previous-frame embedding
//   [2C]              previous-frame mask probability (in [0, 1])
//   [2C+1, 2C+1+n)    windowed FG maps, window sizes ascending
//   [2C+1+n, 2C+1+2n) windowed BG maps
//   [2C+1+2n]         global FG map
//   [2C+2+2n]         global BG map
// giving 2C + 1 + 2n + 2 channels total for n window sizes.
struct AssembledFeatures {
    int object_id = 0;
    int embed_channels = 0;  // C
    int window_count = 0;    // n
    Tensor3 features;

    int total_channels() const { return 2 * embed_channels + 3 + 2 * window_count; }
    int cur_offset() const { return 0; }
    int prev_offset() const { return embed_channels; }
    int mask_offset() const { return 2 * embed_channels; }
    int local_fg_offset() const { return 2 * embed_channels + 1; }
    int local_bg_offset() const { return 2 * embed_channels + 1 + window_count; }
    int global_fg_offset() const {
        return 2 * embed_channels + 1 + 2 * window_count;
    }
    int global_bg_offset() const {
        return 2 * embed_channels + 2 + 2 * window_count;
    }
};

// Pure concatenation in the order documented above; no arithmetic.
// prev_mask_prob must be H x W x 1 with values in [0, 1].
AssembledFeatures assemble_features(const Tensor3& cur, const Tensor3& prev,
                                    const Tensor3& prev_mask_prob,
                                    const MatchOutput& match, int object);

// Full matching for one object at one scale, then assemble_features.
// With downsample_local_half the windowed matching runs on half-resolution
// inputs and its maps are scaled back up bilinearly before concatenation.
AssembledFeatures run_scale(const ScaleSpec& spec, const FrameTriplet& frames,
                            int object, MatchParams params,
                            bool downsample_local_half = false);

// run_scale over every (scale, object) pair; outputs[s][i] corresponds to
// specs[s] and objects[i]. Scales are independent; objects never affect
// each other's stacks.
std::vector<std::vector<AssembledFeatures>> run_multiscale(
    const std::vector<ScaleSpec>& specs,
    const std::vector<FrameTriplet>& pyramid, const std::vector<int>& objects,
    const std::vector<MatchParams>& params,
    bool downsample_local_half = false);

// Decoder-free label transfer for demos and end-to-end tests: each pixel
// takes the object whose combined FG evidence (global and windowed minima)
// is nearest, or background when background evidence is at least as near.
// Ties resolve to background, then to the smallest object id.
ObjectMask nn_propagate(const Frame& ref, const Frame& prev, const Tensor3& cur,
                        const std::vector<int>& objects, MatchParams params,
                        const WindowSet& K, AtrousSpec atrous = {});

}  // namespace fbmatch

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fbmatch/distance.hpp"
#include "fbmatch/tensor.hpp"

namespace fbmatch {

// Square neighborhood radii used by multi-local matching. Sizes are kept
// strictly increasing; use of() to normalize arbitrary input.
struct WindowSet {
    std::vector<int> sizes;

    // Sorts and dedupes. Throws EmptyWindowSet when nothing remains,
    // DimensionMismatch for non-positive entries.
    static WindowSet of(std::vector<int> sizes);

    int largest() const { return sizes.back(); }
    int count() const { return static_cast<int>(sizes.size()); }
};

// Candidate-set thinning on a stride-`factor` grid. factor 1 is dense.
// For global matching the grid is absolute: pixel (x, y) is kept iff
// x % factor == origin && y % factor == origin. Local matching centers
// the grid on each query pixel (offsets that are multiples of factor),
// so `origin` plays no role there.
//
// The default origin 0 keeps the first row/column; origin factor-1
// reproduces schemes that start the grid at coordinate `factor` instead.
struct AtrousSpec {
    int factor = 1;
    int origin = 0;
};

// All matching maps are H×W×1 tensors with values in [-1, 1]; positions
// whose candidate set is empty hold exactly 1.0.
struct GlobalMaps {
    Tensor3 fg;
    Tensor3 bg;
    std::uint64_t referred = 0;  // distance evaluations, FG + BG
};

struct LocalMaps {
    std::vector<Tensor3> fg;  // one map per window size, ascending
    std::vector<Tensor3> bg;
    std::uint64_t referred = 0;
};

// Combined result of global + multi-local matching for one object.
struct MatchOutput {
    Tensor3 global_fg;
    Tensor3 global_bg;
    std::vector<Tensor3> local_fg;
    std::vector<Tensor3> local_bg;
    std::uint64_t referred_pixels = 0;
};

// For every pixel of cur, the minimum biased distance to the reference
// frame's (atrous-thinned) pixels of the object / of its complement.
// cur and ref may differ spatially but must share channels; ref_mask must
// match ref. referred = |cur pixels| * (|FG candidates| + |BG candidates|).
GlobalMaps global_match(const Tensor3& cur, const Tensor3& ref,
                        const ObjectMask& ref_mask, int object,
                        MatchParams params, AtrousSpec atrous = {});

// Windowed variant against the previous frame: for each window size k the
// candidate set is the thinned k-neighborhood of the query pixel, clipped
// to the frame. Distances inside the largest window are computed once;
// smaller-window minima are derived from per-ring partial minima instead
// of being rescanned. cur and prev must share all dimensions.
LocalMaps multi_local_match(const Tensor3& cur, const Tensor3& prev,
                            const ObjectMask& prev_mask, int object,
                            const WindowSet& K, MatchParams params,
                            AtrousSpec atrous = {});

// global_match against ref plus multi_local_match against prev, bundled.
MatchOutput match_object(const Tensor3& cur, const Tensor3& ref,
                         const ObjectMask& ref_mask, const Tensor3& prev,
                         const ObjectMask& prev_mask, int object,
                         const WindowSet& K, MatchParams params,
                         AtrousSpec atrous = {});

// Brute-force reference: triple-nested loops, no reuse, distances taken
// through the exponential form in 64-bit. Kept deliberately slow and
// obvious; inputs are capped at H*W <= 4096 pixels (InputTooLarge).
MatchOutput oracle_match(const Tensor3& cur, const Tensor3& ref,
                         const ObjectMask& ref_mask, const Tensor3& prev,
                         const ObjectMask& prev_mask, int object,
                         const WindowSet& K, MatchParams params,
                         AtrousSpec atrous = {});

// Sizes of the thinned FG candidate set and its thinned complement on the
// absolute grid — the per-query candidate counts of global_match.
std::pair<std::uint64_t, std::uint64_t> count_atrous_candidates(
    const ObjectMask& mask, int object, AtrousSpec atrous = {});

}  // namespace fbmatch

#pragma once

#include "fbmatch/tensor.hpp"

namespace fbmatch {

// Region / boundary scores and their mean for one object.
struct ScorePair {
    double j = 0.0;
    double f = 0.0;
    double jf = 0.0;
};

// Intersection over union of {pred == object} and {gt == object}.
// Both regions empty counts as a perfect 1.0.
double jaccard(const ObjectMask& pred, const ObjectMask& gt, int object);

// Boundary precision/recall F-measure. Boundaries are 4-connected: an
// object pixel is boundary if any 4-neighbour lies outside the object
// (the frame edge counts as outside). A boundary pixel matches when some
// pixel of the other boundary lies within Euclidean distance tol.
// Both boundaries empty -> 1.0; exactly one empty -> 0.0.
double boundary_f(const ObjectMask& pred, const ObjectMask& gt, int object,
                  double tol);

// Default tolerance: 0.8% of the image diagonal, rounded up, at least 1.
double default_boundary_tol(int height, int width);

ScorePair evaluate_masks(const ObjectMask& pred, const ObjectMask& gt,
                         int object, double tol);

// Mean of the ceil(ratio * n) largest entries of a non-empty H x W x 1
// loss map; ratio in (0, 1]. ratio 1.0 is the plain mean.
double bootstrapped_ce(const Tensor3& per_pixel_loss, double ratio = 0.15);

// Per-pixel -log softmax(logits)[label], computed with max-subtraction so
// large logits cannot overflow. logits is H x W x K and labels' values
// index the K channels.
Tensor3 cross_entropy_map(const Tensor3& logits, const ObjectMask& labels);

}  // namespace fbmatch

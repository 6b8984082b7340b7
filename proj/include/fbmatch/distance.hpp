#pragma once

#include <span>

namespace fbmatch {

// Foreground / background distance biases. Both default to 0; any finite
// value is accepted. One instance per matching scale.
struct MatchParams {
    float bias_fg = 0.0f;
    float bias_bg = 0.0f;
};

// ||a - b||^2 accumulated in double. Deliberately non-inline: the matching
// kernels, the dense reference paths and the brute-force oracle all funnel
// through this one definition, so candidate-set-equal call sites produce
// bit-identical squared distances regardless of loop structure.
double squared_distance(std::span<const float> a, std::span<const float> b);

// Biased pixel distance 1 - 2/(1 + exp(d2 + bias)), computed as
// tanh((d2 + bias)/2). The forms are algebraically identical but the exp
// one overflows f32 once d2 + bias exceeds ~88; tanh saturates cleanly.
// Result lies in (-1, 1): 0 at d2 = -bias, -> 1 as d2 grows.
float biased_distance(double d2, float bias);

// Convenience wrapper: biased_distance(squared_distance(e_p, e_q), bias).
// Throws DimensionMismatch when the vectors differ in length.
float pixel_distance(std::span<const float> e_p, std::span<const float> e_q,
                     float bias);

// Numerically stable logistic sigmoid.
double sigmoid(double x);

}  // namespace fbmatch

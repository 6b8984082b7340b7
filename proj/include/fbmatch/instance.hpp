#pragma once

#include <filesystem>
#include <vector>

#include "fbmatch/tensor.hpp"

namespace fbmatch {

// Channel-wise mean embeddings of four pixel groups, concatenated in the
// fixed order [first-FG, first-BG, prev-FG, prev-BG]; length 4*C.
struct GuidanceVector {
    int channels = 0;  // C of the source embeddings
    std::vector<float> values;
};

// Single fully-connected layer mapping a 4*C guidance vector to M
// per-channel gate activations.
struct GateParams {
    int out_channels = 0;        // M
    int in_features = 0;         // 4*C
    std::vector<float> weight;   // row-major M x (4*C)
    std::vector<float> bias;     // M
};

// Pools each of the four groups (first/prev frame x FG/BG of `object`)
// to its channel-wise mean. A group with no pixels yields zeros.
GuidanceVector instance_pool(const Tensor3& first_embed,
                             const ObjectMask& first_mask,
                             const Tensor3& prev_embed,
                             const ObjectMask& prev_mask, int object);

// s = sigmoid(weight * g + bias); output(y,x,c) = s[c] * feature(y,x,c).
// Scales lie strictly in (0, 1), so output magnitude never exceeds the
// input per channel.
Tensor3 gate_forward(const GuidanceVector& g, const GateParams& params,
                     const Tensor3& feature);

// Reads weights from an M x (4C) x 1 tensor file and biases from M x 1 x 1.
GateParams load_gate_params(const std::filesystem::path& weight_file,
                            const std::filesystem::path& bias_file);

}  // namespace fbmatch

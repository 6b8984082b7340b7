#include "fbmatch/instance.hpp"

#include <string>

#include "fbmatch/distance.hpp"
#include "fbmatch/errors.hpp"
#include "fbmatch/io.hpp"

namespace fbmatch {

namespace {

// Appends the channel-wise mean over the selected pixels (mask==object when
// want_fg, else the rest). Empty selections append zeros.
void pool_group(const Tensor3& e, const ObjectMask& m, int object,
                bool want_fg, std::vector<float>& out) {
    std::vector<double> sum(static_cast<std::size_t>(e.channels), 0.0);
    std::uint64_t count = 0;
    for (int y = 0; y < e.height; ++y) {
        for (int x = 0; x < e.width; ++x) {
            if ((m.at(y, x) == object) != want_fg) continue;
            const auto px = e.pixel(y, x);
            for (int c = 0; c < e.channels; ++c) sum[c] += px[c];
            ++count;
        }
    }
    for (int c = 0; c < e.channels; ++c)
        out.push_back(count ? static_cast<float>(sum[c] / count) : 0.0f);
}

}  // namespace

GuidanceVector instance_pool(const Tensor3& first_embed,
                             const ObjectMask& first_mask,
                             const Tensor3& prev_embed,
                             const ObjectMask& prev_mask, int object) {
    if (first_embed.channels != prev_embed.channels)
        throw DimensionMismatch("first/previous embeddings differ in channels: " +
                                std::to_string(first_embed.channels) + " vs " +
                                std::to_string(prev_embed.channels));
    if (first_embed.height != first_mask.height ||
        first_embed.width != first_mask.width ||
        prev_embed.height != prev_mask.height ||
        prev_embed.width != prev_mask.width)
        throw DimensionMismatch("embedding and mask dimensions differ");

    GuidanceVector g;
    g.channels = first_embed.channels;
    g.values.reserve(static_cast<std::size_t>(4) * g.channels);
    pool_group(first_embed, first_mask, object, true, g.values);
    pool_group(first_embed, first_mask, object, false, g.values);
    pool_group(prev_embed, prev_mask, object, true, g.values);
    pool_group(prev_embed, prev_mask, object, false, g.values);
    return g;
}

Tensor3 gate_forward(const GuidanceVector& g, const GateParams& params,
                     const Tensor3& feature) {
    if (params.in_features != static_cast<int>(g.values.size()))
        throw DimensionMismatch("gate expects " +
                                std::to_string(params.in_features) +
                                " guidance values, got " +
                                std::to_string(g.values.size()));
    if (params.out_channels != feature.channels)
        throw DimensionMismatch("gate produces " +
                                std::to_string(params.out_channels) +
                                " scales but feature has " +
                                std::to_string(feature.channels) + " channels");
    if (params.weight.size() != static_cast<std::size_t>(params.out_channels) *
                                    params.in_features ||
        params.bias.size() != static_cast<std::size_t>(params.out_channels))
        throw DimensionMismatch("gate parameter buffers disagree with M/4C");

    std::vector<float> scale(static_cast<std::size_t>(params.out_channels));
    for (int m = 0; m < params.out_channels; ++m) {
        double acc = static_cast<double>(params.bias[m]);
        const float* row =
            params.weight.data() +
            static_cast<std::size_t>(m) * params.in_features;
        for (int j = 0; j < params.in_features; ++j)
            acc += static_cast<double>(row[j]) * g.values[j];
        scale[m] = static_cast<float>(sigmoid(acc));
    }

    Tensor3 out(feature.height, feature.width, feature.channels);
    for (std::size_t i = 0; i < feature.data.size(); ++i)
        out.data[i] = feature.data[i] * scale[i % feature.channels];
    return out;
}

GateParams load_gate_params(const std::filesystem::path& weight_file,
                            const std::filesystem::path& bias_file) {
    const Tensor3 w = load_tensor(weight_file);
    const Tensor3 b = load_tensor(bias_file);
    if (w.channels != 1 || b.channels != 1 || b.width != 1)
        throw DimensionMismatch("gate weights must be Mx(4C)x1 and biases Mx1x1");
    if (w.height != b.height)
        throw DimensionMismatch("weight rows (" + std::to_string(w.height) +
                                ") and bias count (" + std::to_string(b.height) +
                                ") differ");
    GateParams p;
    p.out_channels = w.height;
    p.in_features = w.width;
    p.weight = w.data;
    p.bias = b.data;
    return p;
}

}  // namespace fbmatch

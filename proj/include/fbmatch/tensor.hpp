#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbmatch/errors.hpp"

namespace fbmatch {

// Dense H x W x C float feature map. Row-major, channel-fastest:
// index = (y * width + x) * channels + c. Values are expected to be finite.
struct Tensor3 {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> data;

    Tensor3() = default;
    Tensor3(int h, int w, int c, float fill = 0.0f)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, fill) {}

    static Tensor3 from_data(int h, int w, int c, std::vector<float> values) {
        if (values.size() != static_cast<std::size_t>(h) * w * c)
            throw DimensionMismatch("tensor data length does not match h*w*c");
        Tensor3 t;
        t.height = h;
        t.width = w;
        t.channels = c;
        t.data = std::move(values);
        return t;
    }

    std::size_t size() const { return data.size(); }

    float& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    // All channels of one pixel.
    std::span<const float> pixel(int y, int x) const {
        return {data.data() + (static_cast<std::size_t>(y) * width + x) * channels,
                static_cast<std::size_t>(channels)};
    }
    std::span<float> pixel(int y, int x) {
        return {data.data() + (static_cast<std::size_t>(y) * width + x) * channels,
                static_cast<std::size_t>(channels)};
    }

    bool same_shape(const Tensor3& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

// H x W integer label grid. Label 0 is background, k > 0 an object id.
// Ids are stored as u16 (PGM maxval bound) and need not be contiguous.
struct ObjectMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint16_t> labels;

    ObjectMask() = default;
    ObjectMask(int h, int w, std::uint16_t fill = 0)
        : height(h), width(w),
          labels(static_cast<std::size_t>(h) * w, fill) {}

    static ObjectMask from_labels(int h, int w, std::vector<std::uint16_t> values) {
        if (values.size() != static_cast<std::size_t>(h) * w)
            throw DimensionMismatch("mask label count does not match h*w");
        ObjectMask m;
        m.height = h;
        m.width = w;
        m.labels = std::move(values);
        return m;
    }

    std::uint16_t& at(int y, int x) {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint16_t at(int y, int x) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }

    // Distinct non-zero ids, ascending.
    std::vector<int> object_ids() const;
};

struct PixelCoord {
    int x = 0;
    int y = 0;
    bool operator==(const PixelCoord&) const = default;
};

// Per-object bipartition of a frame: fg holds the pixels of one object,
// bg everything else (other objects count as relative background).
// fg and bg together cover every pixel exactly once, in row-major order.
struct PixelPartition {
    int object_id = 0;
    std::vector<PixelCoord> fg;
    std::vector<PixelCoord> bg;
};

PixelPartition partition_pixels(const ObjectMask& mask, int object_id);

// One video frame: embedding plus its label grid.
struct Frame {
    Tensor3 embedding;
    ObjectMask mask;
};

// Ordered frames of one clip; index 0 is the reference frame.
using FrameSequence = std::vector<Frame>;

}  // namespace fbmatch

#include "fbmatch/resample.hpp"

#include <algorithm>
#include <cmath>

namespace fbmatch {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

double sample_center(int dst, int in, int out) {
    return (dst + 0.5) * (static_cast<double>(in) / out) - 0.5;
}

// Nearest index with ties toward the smaller coordinate.
int nearest_index(double src, int n) {
    const int idx = static_cast<int>(std::ceil(src - 0.5));
    return std::clamp(idx, 0, n - 1);
}

}  // namespace

Tensor3 resize_bilinear(const Tensor3& t, int out_h, int out_w) {
    if (out_h == t.height && out_w == t.width) return t;
    Tensor3 out(out_h, out_w, t.channels);
    if (out.size() == 0 || t.size() == 0) return out;

    for (int y = 0; y < out_h; ++y) {
        const double sy = sample_center(y, t.height, out_h);
        const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, t.height - 1);
        const int y1 = std::min(y0 + 1, t.height - 1);
        const double fy = std::clamp(sy - y0, 0.0, 1.0);
        for (int x = 0; x < out_w; ++x) {
            const double sx = sample_center(x, t.width, out_w);
            const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, t.width - 1);
            const int x1 = std::min(x0 + 1, t.width - 1);
            const double fx = std::clamp(sx - x0, 0.0, 1.0);

            const double w00 = (1.0 - fy) * (1.0 - fx);
            const double w01 = (1.0 - fy) * fx;
            const double w10 = fy * (1.0 - fx);
            const double w11 = fy * fx;
            for (int c = 0; c < t.channels; ++c) {
                const double v = w00 * t.at(y0, x0, c) + w01 * t.at(y0, x1, c) +
                                 w10 * t.at(y1, x0, c) + w11 * t.at(y1, x1, c);
                out.at(y, x, c) = static_cast<float>(v);
            }
        }
    }
    return out;
}

ObjectMask resize_nearest(const ObjectMask& m, int out_h, int out_w) {
    if (out_h == m.height && out_w == m.width) return m;
    ObjectMask out(out_h, out_w);
    if (out.labels.empty() || m.labels.empty()) return out;

    for (int y = 0; y < out_h; ++y) {
        const int sy = nearest_index(sample_center(y, m.height, out_h), m.height);
        for (int x = 0; x < out_w; ++x) {
            const int sx = nearest_index(sample_center(x, m.width, out_w), m.width);
            out.at(y, x) = m.at(sy, sx);
        }
    }
    return out;
}

Tensor3 downsample_embedding(const Tensor3& e, int factor) {
    if (factor < 1)
        throw ZeroFactor("downsample factor must be >= 1, got " + std::to_string(factor));
    if (factor == 1) return e;
    return resize_bilinear(e, ceil_div(e.height, factor), ceil_div(e.width, factor));
}

ObjectMask downsample_mask(const ObjectMask& m, int factor) {
    if (factor < 1)
        throw ZeroFactor("downsample factor must be >= 1, got " + std::to_string(factor));
    if (factor == 1) return m;
    return resize_nearest(m, ceil_div(m.height, factor), ceil_div(m.width, factor));
}

Tensor3 flip_horizontal(const Tensor3& t) {
    Tensor3 out(t.height, t.width, t.channels);
    for (int y = 0; y < t.height; ++y)
        for (int x = 0; x < t.width; ++x)
            for (int c = 0; c < t.channels; ++c)
                out.at(y, x, c) = t.at(y, t.width - 1 - x, c);
    return out;
}

ObjectMask flip_horizontal(const ObjectMask& m) {
    ObjectMask out(m.height, m.width);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            out.at(y, x) = m.at(y, m.width - 1 - x);
    return out;
}

}  // namespace fbmatch

#include "fbmatch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbmatch/errors.hpp"
#include "fbmatch/resample.hpp"
#include "fbmatch/rng.hpp"

namespace fbmatch {

namespace {

struct Draw {
    int scaled_h = 0;
    int scaled_w = 0;
    int y0 = 0;
    int x0 = 0;
};

// One (scale, position) draw. Order of generator consumption is part of
// the reproducibility contract: scale, then y, then x.
Draw draw_window(Pcg32& rng, int h, int w, const CropConfig& cfg) {
    const double scale = rng.next_range(cfg.scale_lo, cfg.scale_hi);
    Draw d;
    d.scaled_h = std::max(1, static_cast<int>(std::lround(h * scale)));
    d.scaled_w = std::max(1, static_cast<int>(std::lround(w * scale)));
    if (cfg.window_h > d.scaled_h || cfg.window_w > d.scaled_w)
        throw WindowTooLarge("crop window " + std::to_string(cfg.window_h) +
                             "x" + std::to_string(cfg.window_w) +
                             " exceeds scaled frame " +
                             std::to_string(d.scaled_h) + "x" +
                             std::to_string(d.scaled_w));
    d.y0 = static_cast<int>(
        rng.next_below(static_cast<std::uint32_t>(d.scaled_h - cfg.window_h + 1)));
    d.x0 = static_cast<int>(
        rng.next_below(static_cast<std::uint32_t>(d.scaled_w - cfg.window_w + 1)));
    return d;
}

ObjectMask crop_mask(const ObjectMask& m, const Draw& d, const CropConfig& cfg) {
    const ObjectMask scaled = resize_nearest(m, d.scaled_h, d.scaled_w);
    ObjectMask out(cfg.window_h, cfg.window_w);
    for (int y = 0; y < cfg.window_h; ++y)
        for (int x = 0; x < cfg.window_w; ++x)
            out.at(y, x) = scaled.at(d.y0 + y, d.x0 + x);
    return out;
}

Tensor3 crop_embedding(const Tensor3& e, const Draw& d, const CropConfig& cfg) {
    const Tensor3 scaled = resize_bilinear(e, d.scaled_h, d.scaled_w);
    Tensor3 out(cfg.window_h, cfg.window_w, e.channels);
    for (int y = 0; y < cfg.window_h; ++y) {
        for (int x = 0; x < cfg.window_w; ++x) {
            const auto src = scaled.pixel(d.y0 + y, d.x0 + x);
            std::copy(src.begin(), src.end(), out.pixel(y, x).begin());
        }
    }
    return out;
}

int fg_pixels_in_window(const ObjectMask& scaled, const Draw& d,
                        const CropConfig& cfg) {
    int count = 0;
    for (int y = 0; y < cfg.window_h; ++y)
        for (int x = 0; x < cfg.window_w; ++x)
            if (scaled.at(d.y0 + y, d.x0 + x) != 0) ++count;
    return count;
}

}  // namespace

FrameSequence balanced_random_crop(const FrameSequence& frames,
                                   const CropConfig& cfg, std::uint64_t seed) {
    if (frames.empty()) throw EmptyInput("cannot crop an empty frame sequence");
    if (cfg.window_h < 1 || cfg.window_w < 1)
        throw WindowTooLarge("crop window dimensions must be positive");
    if (cfg.max_retries < 1)
        throw MaxRetriesExceeded("max_retries must be at least 1");

    const int threshold =
        cfg.min_fg_pixels >= 0
            ? cfg.min_fg_pixels
            : std::max(1, cfg.window_h * cfg.window_w / 100);

    const ObjectMask& first = frames.front().mask;
    Pcg32 rng(seed);
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        const Draw d = draw_window(rng, first.height, first.width, cfg);
        const ObjectMask scaled = resize_nearest(first, d.scaled_h, d.scaled_w);
        if (fg_pixels_in_window(scaled, d, cfg) < threshold) continue;

        FrameSequence out;
        out.reserve(frames.size());
        for (const Frame& f : frames)
            out.push_back(Frame{crop_embedding(f.embedding, d, cfg),
                                crop_mask(f.mask, d, cfg)});
        return out;
    }
    throw MaxRetriesExceeded(
        "no crop met the " + std::to_string(threshold) +
        "-pixel foreground threshold in " + std::to_string(cfg.max_retries) +
        " draws");
}

ClipSample sample_clip(int video_len, int n, std::uint64_t seed) {
    if (n < 1) throw VideoTooShort("clip length parameter must be >= 1");
    if (video_len < n + 1)
        throw VideoTooShort("video of " + std::to_string(video_len) +
                            " frames cannot supply " + std::to_string(n + 1) +
                            " consecutive frames");
    Pcg32 rng(seed);
    ClipSample s;
    s.ref_index =
        static_cast<int>(rng.next_below(static_cast<std::uint32_t>(video_len)));
    const int start = static_cast<int>(
        rng.next_below(static_cast<std::uint32_t>(video_len - n)));
    s.sequence.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) s.sequence[static_cast<std::size_t>(i)] = start + i;
    return s;
}

}  // namespace fbmatch

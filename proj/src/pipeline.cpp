#include "fbmatch/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "fbmatch/errors.hpp"
#include "fbmatch/resample.hpp"

namespace fbmatch {

namespace {

void require_same_plane(const Tensor3& a, const Tensor3& b, const char* what) {
    if (a.height != b.height || a.width != b.width)
        throw DimensionMismatch(std::string(what) + " is " +
                                std::to_string(b.height) + "x" +
                                std::to_string(b.width) + ", expected " +
                                std::to_string(a.height) + "x" +
                                std::to_string(a.width));
}

// {0,1} probability plane for one object of a hard label grid.
Tensor3 mask_to_prob(const ObjectMask& m, int object) {
    Tensor3 p(m.height, m.width, 1);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            p.at(y, x, 0) = m.at(y, x) == object ? 1.0f : 0.0f;
    return p;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

AssembledFeatures assemble_features(const Tensor3& cur, const Tensor3& prev,
                                    const Tensor3& prev_mask_prob,
                                    const MatchOutput& match, int object) {
    if (cur.channels != prev.channels)
        throw DimensionMismatch("current/previous embeddings differ in channels");
    require_same_plane(cur, prev, "previous embedding");
    require_same_plane(cur, prev_mask_prob, "previous mask probability");
    if (prev_mask_prob.channels != 1)
        throw DimensionMismatch("mask probability must have a single channel");
    for (const float v : prev_mask_prob.data)
        if (!(v >= 0.0f && v <= 1.0f))
            throw DimensionMismatch("mask probabilities must lie in [0, 1]");
    if (match.local_fg.size() != match.local_bg.size())
        throw DimensionMismatch("windowed FG/BG map counts differ");
    require_same_plane(cur, match.global_fg, "global FG map");
    require_same_plane(cur, match.global_bg, "global BG map");
    for (const auto& m : match.local_fg) require_same_plane(cur, m, "windowed FG map");
    for (const auto& m : match.local_bg) require_same_plane(cur, m, "windowed BG map");

    AssembledFeatures out;
    out.object_id = object;
    out.embed_channels = cur.channels;
    out.window_count = static_cast<int>(match.local_fg.size());
    out.features = Tensor3(cur.height, cur.width, out.total_channels());

    const int c = cur.channels;
    const int n = out.window_count;
    for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
            auto dst = out.features.pixel(y, x);
            const auto cp = cur.pixel(y, x);
            const auto pp = prev.pixel(y, x);
            std::copy(cp.begin(), cp.end(), dst.begin());
            std::copy(pp.begin(), pp.end(), dst.begin() + c);
            dst[2 * c] = prev_mask_prob.at(y, x, 0);
            for (int i = 0; i < n; ++i) {
                dst[out.local_fg_offset() + i] = match.local_fg[i].at(y, x, 0);
                dst[out.local_bg_offset() + i] = match.local_bg[i].at(y, x, 0);
            }
            dst[out.global_fg_offset()] = match.global_fg.at(y, x, 0);
            dst[out.global_bg_offset()] = match.global_bg.at(y, x, 0);
        }
    }
    return out;
}

AssembledFeatures run_scale(const ScaleSpec& spec, const FrameTriplet& frames,
                            int object, MatchParams params,
                            bool downsample_local_half) {
    if (frames.cur.channels != spec.channels)
        throw DimensionMismatch("scale expects " +
                                std::to_string(spec.channels) +
                                "-channel embeddings, got " +
                                std::to_string(frames.cur.channels));

    GlobalMaps g = global_match(frames.cur, frames.ref.embedding,
                                frames.ref.mask, object, params, spec.atrous);

    LocalMaps loc;
    if (downsample_local_half) {
        const Tensor3 cur_half = downsample_embedding(frames.cur, 2);
        const Tensor3 prev_half = downsample_embedding(frames.prev.embedding, 2);
        const ObjectMask mask_half = downsample_mask(frames.prev.mask, 2);
        loc = multi_local_match(cur_half, prev_half, mask_half, object,
                                spec.windows, params, spec.atrous);
        for (auto* maps : {&loc.fg, &loc.bg})
            for (auto& m : *maps)
                m = resize_bilinear(m, frames.cur.height, frames.cur.width);
    } else {
        loc = multi_local_match(frames.cur, frames.prev.embedding,
                                frames.prev.mask, object, spec.windows, params,
                                spec.atrous);
    }

    MatchOutput match;
    match.global_fg = std::move(g.fg);
    match.global_bg = std::move(g.bg);
    match.local_fg = std::move(loc.fg);
    match.local_bg = std::move(loc.bg);
    match.referred_pixels = g.referred + loc.referred;

    const Tensor3 prob = mask_to_prob(frames.prev.mask, object);
    return assemble_features(frames.cur, frames.prev.embedding, prob, match,
                             object);
}

std::vector<std::vector<AssembledFeatures>> run_multiscale(
    const std::vector<ScaleSpec>& specs,
    const std::vector<FrameTriplet>& pyramid, const std::vector<int>& objects,
    const std::vector<MatchParams>& params, bool downsample_local_half) {
    if (specs.size() != pyramid.size())
        throw DimensionMismatch("have " + std::to_string(specs.size()) +
                                " scale specs but " +
                                std::to_string(pyramid.size()) +
                                " pyramid levels");
    if (specs.size() != params.size())
        throw DimensionMismatch("one MatchParams per scale required");

    // Finer-to-coarser levels must shrink with the stride ratio.
    for (std::size_t s = 1; s < specs.size(); ++s) {
        const auto& fine = pyramid[s - 1].cur;
        const auto& coarse = pyramid[s].cur;
        if (specs[s].stride % specs[s - 1].stride == 0) {
            const int ratio = specs[s].stride / specs[s - 1].stride;
            if (coarse.height != ceil_div(fine.height, ratio) ||
                coarse.width != ceil_div(fine.width, ratio))
                throw DimensionMismatch(
                    "pyramid level " + std::to_string(s) +
                    " does not match its stride ratio of " +
                    std::to_string(ratio));
        }
    }

    std::vector<std::vector<AssembledFeatures>> out(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        out[s].reserve(objects.size());
        for (const int object : objects)
            out[s].push_back(run_scale(specs[s], pyramid[s], object, params[s],
                                       downsample_local_half));
    }
    return out;
}

ObjectMask nn_propagate(const Frame& ref, const Frame& prev, const Tensor3& cur,
                        const std::vector<int>& objects, MatchParams params,
                        const WindowSet& K, AtrousSpec atrous) {
    ObjectMask out(cur.height, cur.width);
    if (objects.empty()) return out;

    // Sorted unique ids make the tie rule "smallest object id" a first-hit.
    std::vector<int> ids = objects;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<MatchOutput> per_object;
    per_object.reserve(ids.size());
    for (const int o : ids)
        per_object.push_back(match_object(cur, ref.embedding, ref.mask,
                                          prev.embedding, prev.mask, o, K,
                                          params, atrous));

    for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
            // Background evidence: nearest BG candidate across all objects'
            // relative backgrounds.
            float bg = std::numeric_limits<float>::infinity();
            for (const auto& m : per_object) {
                bg = std::min(bg, m.global_bg.at(y, x, 0));
                for (const auto& lm : m.local_bg) bg = std::min(bg, lm.at(y, x, 0));
            }
            int label = 0;
            float best = bg;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                float fg = per_object[i].global_fg.at(y, x, 0);
                for (const auto& lm : per_object[i].local_fg)
                    fg = std::min(fg, lm.at(y, x, 0));
                if (fg < best) {  // strict: ties stay with background / earlier id
                    best = fg;
                    label = ids[i];
                }
            }
            out.at(y, x) = static_cast<std::uint16_t>(label);
        }
    }
    return out;
}

}  // namespace fbmatch

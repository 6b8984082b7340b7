#include "fbmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fbmatch/errors.hpp"
#include "fbmatch/parallel.hpp"

namespace fbmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_atrous(const AtrousSpec& a) {
    if (a.factor < 1)
        throw ZeroFactor("atrous factor must be >= 1, got " +
                         std::to_string(a.factor));
    if (a.origin < 0 || a.origin >= a.factor)
        throw ZeroFactor("atrous origin must lie in [0, factor), got " +
                         std::to_string(a.origin) + " for factor " +
                         std::to_string(a.factor));
}

void check_mask_dims(const Tensor3& t, const ObjectMask& m, const char* what) {
    if (t.height != m.height || t.width != m.width)
        throw DimensionMismatch(std::string(what) + " mask is " +
                                std::to_string(m.height) + "x" +
                                std::to_string(m.width) + " but embedding is " +
                                std::to_string(t.height) + "x" +
                                std::to_string(t.width));
}

float finish(double min_d2, float bias, bool any) {
    return any ? biased_distance(min_d2, bias) : 1.0f;
}

}  // namespace

WindowSet WindowSet::of(std::vector<int> sizes) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.empty()) throw EmptyWindowSet("window set is empty");
    if (sizes.front() < 1)
        throw DimensionMismatch("window sizes must be positive, got " +
                                std::to_string(sizes.front()));
    return WindowSet{std::move(sizes)};
}

GlobalMaps global_match(const Tensor3& cur, const Tensor3& ref,
                        const ObjectMask& ref_mask, int object,
                        MatchParams params, AtrousSpec atrous) {
    check_atrous(atrous);
    if (cur.channels != ref.channels)
        throw DimensionMismatch("query embedding has " +
                                std::to_string(cur.channels) +
                                " channels, reference has " +
                                std::to_string(ref.channels));
    check_mask_dims(ref, ref_mask, "reference");

    const int c = ref.channels;
    // Gather thinned candidates into contiguous buffers so the hot loop
    // streams memory linearly.
    std::vector<float> fg_buf;
    std::vector<float> bg_buf;
    for (int y = atrous.origin; y < ref.height; y += atrous.factor) {
        for (int x = atrous.origin; x < ref.width; x += atrous.factor) {
            const auto px = ref.pixel(y, x);
            auto& buf = ref_mask.at(y, x) == object ? fg_buf : bg_buf;
            buf.insert(buf.end(), px.begin(), px.end());
        }
    }
    const std::size_t n_fg = c ? fg_buf.size() / c : 0;
    const std::size_t n_bg = c ? bg_buf.size() / c : 0;

    GlobalMaps out;
    out.fg = Tensor3(cur.height, cur.width, 1);
    out.bg = Tensor3(cur.height, cur.width, 1);
    out.referred = static_cast<std::uint64_t>(cur.height) * cur.width *
                   (n_fg + n_bg);

    parallel_for(0, cur.height, [&](int y) {
        for (int x = 0; x < cur.width; ++x) {
            const auto q = cur.pixel(y, x);
            double best_fg = kInf;
            for (std::size_t i = 0; i < n_fg; ++i) {
                const double d2 = squared_distance(
                    q, {fg_buf.data() + i * c, static_cast<std::size_t>(c)});
                if (d2 < best_fg) best_fg = d2;
            }
            double best_bg = kInf;
            for (std::size_t i = 0; i < n_bg; ++i) {
                const double d2 = squared_distance(
                    q, {bg_buf.data() + i * c, static_cast<std::size_t>(c)});
                if (d2 < best_bg) best_bg = d2;
            }
            out.fg.at(y, x, 0) = finish(best_fg, params.bias_fg, n_fg > 0);
            out.bg.at(y, x, 0) = finish(best_bg, params.bias_bg, n_bg > 0);
        }
    });
    return out;
}

LocalMaps multi_local_match(const Tensor3& cur, const Tensor3& prev,
                            const ObjectMask& prev_mask, int object,
                            const WindowSet& K, MatchParams params,
                            AtrousSpec atrous) {
    check_atrous(atrous);
    if (K.sizes.empty()) throw EmptyWindowSet("window set is empty");
    if (!cur.same_shape(prev))
        throw DimensionMismatch("current and previous embeddings differ in shape");
    check_mask_dims(prev, prev_mask, "previous");

    const int h = cur.height;
    const int w = cur.width;
    const int n = K.count();
    const int k_max = K.largest();
    const int l = atrous.factor;
    // Largest in-window offset that survives thinning.
    const int reach = (k_max / l) * l;

    LocalMaps out;
    out.fg.assign(n, Tensor3(h, w, 1));
    out.bg.assign(n, Tensor3(h, w, 1));

    std::vector<std::uint64_t> row_referred(static_cast<std::size_t>(h), 0);

    parallel_for(0, h, [&](int y) {
        // Minimum squared distance per Chebyshev ring m = max(|dx|,|dy|);
        // the k-window minimum is then the running minimum over rings
        // m <= k. One scan of the largest window serves every window.
        std::vector<double> ring_fg(static_cast<std::size_t>(k_max) + 1);
        std::vector<double> ring_bg(static_cast<std::size_t>(k_max) + 1);
        std::uint64_t evals = 0;

        for (int x = 0; x < w; ++x) {
            std::fill(ring_fg.begin(), ring_fg.end(), kInf);
            std::fill(ring_bg.begin(), ring_bg.end(), kInf);
            const auto q = cur.pixel(y, x);

            const int dy_lo = std::max(-reach, -y);
            const int dy_hi = std::min(reach, h - 1 - y);
            const int dx_lo = std::max(-reach, -x);
            const int dx_hi = std::min(reach, w - 1 - x);
            // First thinned offset >= lo: round lo up to a multiple of l.
            auto align_up = [l](int v) {
                return (v >= 0) ? ((v + l - 1) / l) * l : -((-v) / l) * l;
            };
            for (int dy = align_up(dy_lo); dy <= dy_hi; dy += l) {
                const int ay = std::abs(dy);
                for (int dx = align_up(dx_lo); dx <= dx_hi; dx += l) {
                    const int m = std::max(ay, std::abs(dx));
                    const double d2 =
                        squared_distance(q, prev.pixel(y + dy, x + dx));
                    auto& ring = prev_mask.at(y + dy, x + dx) == object
                                     ? ring_fg
                                     : ring_bg;
                    if (d2 < ring[m]) ring[m] = d2;
                    ++evals;
                }
            }

            double run_fg = kInf;
            double run_bg = kInf;
            int wi = 0;
            for (int m = 0; m <= k_max && wi < n; ++m) {
                run_fg = std::min(run_fg, ring_fg[m]);
                run_bg = std::min(run_bg, ring_bg[m]);
                while (wi < n && K.sizes[wi] == m) {
                    out.fg[wi].at(y, x, 0) =
                        finish(run_fg, params.bias_fg, run_fg != kInf);
                    out.bg[wi].at(y, x, 0) =
                        finish(run_bg, params.bias_bg, run_bg != kInf);
                    ++wi;
                }
            }
        }
        row_referred[static_cast<std::size_t>(y)] = evals;
    });

    out.referred = std::accumulate(row_referred.begin(), row_referred.end(),
                                   std::uint64_t{0});
    return out;
}

MatchOutput match_object(const Tensor3& cur, const Tensor3& ref,
                         const ObjectMask& ref_mask, const Tensor3& prev,
                         const ObjectMask& prev_mask, int object,
                         const WindowSet& K, MatchParams params,
                         AtrousSpec atrous) {
    GlobalMaps g = global_match(cur, ref, ref_mask, object, params, atrous);
    LocalMaps loc =
        multi_local_match(cur, prev, prev_mask, object, K, params, atrous);
    MatchOutput out;
    out.global_fg = std::move(g.fg);
    out.global_bg = std::move(g.bg);
    out.local_fg = std::move(loc.fg);
    out.local_bg = std::move(loc.bg);
    out.referred_pixels = g.referred + loc.referred;
    return out;
}

MatchOutput oracle_match(const Tensor3& cur, const Tensor3& ref,
                         const ObjectMask& ref_mask, const Tensor3& prev,
                         const ObjectMask& prev_mask, int object,
                         const WindowSet& K, MatchParams params,
                         AtrousSpec atrous) {
    check_atrous(atrous);
    if (K.sizes.empty()) throw EmptyWindowSet("window set is empty");
    for (const Tensor3* t : {&cur, &ref, &prev})
        if (static_cast<long long>(t->height) * t->width > 4096)
            throw InputTooLarge("oracle accepts at most 4096 pixels per frame");
    if (cur.channels != ref.channels || !cur.same_shape(prev))
        throw DimensionMismatch("oracle inputs disagree in shape");
    check_mask_dims(ref, ref_mask, "reference");
    check_mask_dims(prev, prev_mask, "previous");

    const int l = atrous.factor;
    std::uint64_t evals = 0;
    // The exponential form of the distance, evaluated in double throughout.
    const auto dist = [&evals](std::span<const float> a,
                               std::span<const float> b, float bias) {
        ++evals;
        const double d2 = squared_distance(a, b);
        return 1.0 - 2.0 / (1.0 + std::exp(d2 + static_cast<double>(bias)));
    };

    MatchOutput out;
    out.global_fg = Tensor3(cur.height, cur.width, 1);
    out.global_bg = Tensor3(cur.height, cur.width, 1);
    for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
            const auto q = cur.pixel(y, x);
            double best_fg = kInf;
            double best_bg = kInf;
            for (int ry = 0; ry < ref.height; ++ry) {
                for (int rx = 0; rx < ref.width; ++rx) {
                    if (ry % l != atrous.origin || rx % l != atrous.origin)
                        continue;
                    if (ref_mask.at(ry, rx) == object)
                        best_fg = std::min(
                            best_fg, dist(q, ref.pixel(ry, rx), params.bias_fg));
                    else
                        best_bg = std::min(
                            best_bg, dist(q, ref.pixel(ry, rx), params.bias_bg));
                }
            }
            out.global_fg.at(y, x, 0) =
                best_fg == kInf ? 1.0f : static_cast<float>(best_fg);
            out.global_bg.at(y, x, 0) =
                best_bg == kInf ? 1.0f : static_cast<float>(best_bg);
        }
    }

    for (int k : K.sizes) {
        Tensor3 fg_map(cur.height, cur.width, 1);
        Tensor3 bg_map(cur.height, cur.width, 1);
        for (int y = 0; y < cur.height; ++y) {
            for (int x = 0; x < cur.width; ++x) {
                const auto q = cur.pixel(y, x);
                double best_fg = kInf;
                double best_bg = kInf;
                for (int dy = -k; dy <= k; ++dy) {
                    for (int dx = -k; dx <= k; ++dx) {
                        if (std::abs(dy) % l != 0 || std::abs(dx) % l != 0)
                            continue;
                        const int py = y + dy;
                        const int px = x + dx;
                        if (py < 0 || py >= prev.height || px < 0 ||
                            px >= prev.width)
                            continue;
                        if (prev_mask.at(py, px) == object)
                            best_fg = std::min(
                                best_fg,
                                dist(q, prev.pixel(py, px), params.bias_fg));
                        else
                            best_bg = std::min(
                                best_bg,
                                dist(q, prev.pixel(py, px), params.bias_bg));
                    }
                }
                fg_map.at(y, x, 0) =
                    best_fg == kInf ? 1.0f : static_cast<float>(best_fg);
                bg_map.at(y, x, 0) =
                    best_bg == kInf ? 1.0f : static_cast<float>(best_bg);
            }
        }
        out.local_fg.push_back(std::move(fg_map));
        out.local_bg.push_back(std::move(bg_map));
    }

    out.referred_pixels = evals;
    return out;
}

std::pair<std::uint64_t, std::uint64_t> count_atrous_candidates(
    const ObjectMask& mask, int object, AtrousSpec atrous) {
    check_atrous(atrous);
    std::uint64_t fg = 0;
    std::uint64_t bg = 0;
    for (int y = atrous.origin; y < mask.height; y += atrous.factor)
        for (int x = atrous.origin; x < mask.width; x += atrous.factor)
            (mask.at(y, x) == object ? fg : bg) += 1;
    return {fg, bg};
}

}  // namespace fbmatch

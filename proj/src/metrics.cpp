#include "fbmatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "fbmatch/errors.hpp"

namespace fbmatch {

namespace {

void check_dims(const ObjectMask& a, const ObjectMask& b) {
    if (a.height != b.height || a.width != b.width)
        throw DimensionMismatch("masks are " + std::to_string(a.height) + "x" +
                                std::to_string(a.width) + " and " +
                                std::to_string(b.height) + "x" +
                                std::to_string(b.width));
}

// 4-connected boundary of {mask == object}; frame edges count as outside.
std::vector<std::uint8_t> boundary_of(const ObjectMask& m, int object) {
    const int h = m.height;
    const int w = m.width;
    std::vector<std::uint8_t> b(static_cast<std::size_t>(h) * w, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (m.at(y, x) != object) continue;
            const bool edge = y == 0 || y == h - 1 || x == 0 || x == w - 1 ||
                              m.at(y - 1, x) != object ||
                              m.at(y + 1, x) != object ||
                              m.at(y, x - 1) != object ||
                              m.at(y, x + 1) != object;
            if (edge) b[static_cast<std::size_t>(y) * w + x] = 1;
        }
    }
    return b;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// One pass of the lower-envelope squared distance transform (Felzenszwalb
// & Huttenlocher). f holds per-cell values, d the output; both length n.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] == kInf) continue;
        if (f[static_cast<std::size_t>(v[0])] == kInf) {
            v[0] = q;
            continue;
        }
        double s;
        for (;;) {
            const int p = v[static_cast<std::size_t>(k)];
            s = (f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q -
                 (f[static_cast<std::size_t>(p)] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s > z[static_cast<std::size_t>(k)]) break;
            --k;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        if (f[static_cast<std::size_t>(v[0])] == kInf) {
            d[static_cast<std::size_t>(q)] = kInf;
            continue;
        }
        while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
        const int p = v[static_cast<std::size_t>(k)];
        d[static_cast<std::size_t>(q)] =
            static_cast<double>(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
    }
}

// Exact squared Euclidean distance of every cell to the nearest set cell.
// Intermediate values are small integers, so doubles stay exact.
std::vector<double> squared_edt(const std::vector<std::uint8_t>& set, int h,
                                int w) {
    std::vector<double> dist(static_cast<std::size_t>(h) * w, kInf);
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (set[i]) dist[i] = 0.0;

    std::vector<double> col(static_cast<std::size_t>(h));
    std::vector<double> out(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y)
            col[static_cast<std::size_t>(y)] =
                dist[static_cast<std::size_t>(y) * w + x];
        edt_1d(col, out, h);
        for (int y = 0; y < h; ++y)
            dist[static_cast<std::size_t>(y) * w + x] =
                out[static_cast<std::size_t>(y)];
    }
    std::vector<double> row(static_cast<std::size_t>(w));
    std::vector<double> rout(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x)
            row[static_cast<std::size_t>(x)] =
                dist[static_cast<std::size_t>(y) * w + x];
        edt_1d(row, rout, w);
        for (int x = 0; x < w; ++x)
            dist[static_cast<std::size_t>(y) * w + x] =
                rout[static_cast<std::size_t>(x)];
    }
    return dist;
}

// Fraction of `from` boundary pixels within tol of the `to` boundary.
double matched_fraction(const std::vector<std::uint8_t>& from,
                        const std::vector<double>& dist_to, double tol) {
    std::uint64_t total = 0;
    std::uint64_t hit = 0;
    const double tol2 = tol * tol;
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (!from[i]) continue;
        ++total;
        if (dist_to[i] <= tol2) ++hit;
    }
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

}  // namespace

double jaccard(const ObjectMask& pred, const ObjectMask& gt, int object) {
    check_dims(pred, gt);
    std::uint64_t inter = 0;
    std::uint64_t uni = 0;
    for (std::size_t i = 0; i < pred.labels.size(); ++i) {
        const bool p = pred.labels[i] == object;
        const bool g = gt.labels[i] == object;
        inter += p && g;
        uni += p || g;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double boundary_f(const ObjectMask& pred, const ObjectMask& gt, int object,
                  double tol) {
    check_dims(pred, gt);
    const auto pb = boundary_of(pred, object);
    const auto gb = boundary_of(gt, object);
    const bool p_empty = std::find(pb.begin(), pb.end(), 1) == pb.end();
    const bool g_empty = std::find(gb.begin(), gb.end(), 1) == gb.end();
    if (p_empty && g_empty) return 1.0;
    if (p_empty || g_empty) return 0.0;

    const auto dist_gt = squared_edt(gb, gt.height, gt.width);
    const auto dist_pred = squared_edt(pb, pred.height, pred.width);
    const double precision = matched_fraction(pb, dist_gt, tol);
    const double recall = matched_fraction(gb, dist_pred, tol);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double default_boundary_tol(int height, int width) {
    const double diag = std::sqrt(static_cast<double>(height) * height +
                                  static_cast<double>(width) * width);
    return std::max(1.0, std::ceil(0.008 * diag));
}

ScorePair evaluate_masks(const ObjectMask& pred, const ObjectMask& gt,
                         int object, double tol) {
    ScorePair s;
    s.j = jaccard(pred, gt, object);
    s.f = boundary_f(pred, gt, object, tol);
    s.jf = 0.5 * (s.j + s.f);
    return s;
}

double bootstrapped_ce(const Tensor3& per_pixel_loss, double ratio) {
    if (per_pixel_loss.data.empty())
        throw EmptyInput("loss map has no pixels");
    if (per_pixel_loss.channels != 1)
        throw DimensionMismatch("loss map must have a single channel");
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw BadRatio("ratio must lie in (0, 1], got " + std::to_string(ratio));

    const std::size_t n = per_pixel_loss.data.size();
    // ceil(ratio*n) in exact intent: ratio*n often lands a hair above an
    // integer (0.15*20 = 3.0000000000000004), so snap near-integers first.
    const double x = ratio * static_cast<double>(n);
    const double nearest = std::nearbyint(x);
    const std::size_t m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::abs(x - nearest) < 1e-9 * std::max(1.0, x)
                                     ? nearest
                                     : std::ceil(x)),
        1, n);

    std::vector<float> v = per_pixel_loss.data;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m - 1),
                     v.end(), std::greater<float>());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += static_cast<double>(v[i]);
    return sum / static_cast<double>(m);
}

Tensor3 cross_entropy_map(const Tensor3& logits, const ObjectMask& labels) {
    if (logits.height != labels.height || logits.width != labels.width)
        throw DimensionMismatch("logits and labels differ spatially");
    Tensor3 out(logits.height, logits.width, 1);
    for (int y = 0; y < logits.height; ++y) {
        for (int x = 0; x < logits.width; ++x) {
            const int label = labels.at(y, x);
            if (label >= logits.channels)
                throw DimensionMismatch("label " + std::to_string(label) +
                                        " outside the " +
                                        std::to_string(logits.channels) +
                                        " logit channels");
            const auto lg = logits.pixel(y, x);
            const double mx = *std::max_element(lg.begin(), lg.end());
            double sum = 0.0;
            for (const float l : lg) sum += std::exp(static_cast<double>(l) - mx);
            // -log softmax = logsumexp - logit
            out.at(y, x, 0) = static_cast<float>(
                (std::log(sum) + mx) - static_cast<double>(lg[label]));
        }
    }
    return out;
}

}  // namespace fbmatch

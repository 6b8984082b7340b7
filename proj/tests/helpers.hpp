#pragma once

// Shared test utilities: deterministic input synthesis, a scratch
// directory, and independently coded reference implementations that the
// optimized kernels are checked against.

#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fbmatch/distance.hpp"
#include "fbmatch/matching.hpp"
#include "fbmatch/rng.hpp"
#include "fbmatch/tensor.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("fbmatch_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const {
        return path_ / name;
    }

  private:
    std::filesystem::path path_;
};

inline fbmatch::Tensor3 random_tensor(int h, int w, int c, fbmatch::Pcg32& rng,
                                      double lo = -2.0, double hi = 2.0) {
    fbmatch::Tensor3 t(h, w, c);
    for (auto& v : t.data) v = static_cast<float>(rng.next_range(lo, hi));
    return t;
}

inline fbmatch::ObjectMask random_mask(int h, int w, int max_objects,
                                       fbmatch::Pcg32& rng) {
    fbmatch::ObjectMask m(h, w);
    for (auto& l : m.labels)
        l = static_cast<std::uint16_t>(
            rng.next_below(static_cast<std::uint32_t>(max_objects) + 1));
    return m;
}

inline bool bitwise_equal(const fbmatch::Tensor3& a, const fbmatch::Tensor3& b) {
    return a.same_shape(b) &&
           (a.data.empty() ||
            std::memcmp(a.data.data(), b.data.data(),
                        a.data.size() * sizeof(float)) == 0);
}

// ---- Reference implementations ----
//
// Coded independently of the library kernels: plain scans, one biased
// distance per candidate, minimum taken over the finished values. Used to
// pin down the dense (factor-1) semantics bit for bit.

inline std::pair<fbmatch::Tensor3, fbmatch::Tensor3> dense_global(
    const fbmatch::Tensor3& cur, const fbmatch::Tensor3& ref,
    const fbmatch::ObjectMask& ref_mask, int object,
    fbmatch::MatchParams params) {
    fbmatch::Tensor3 fg(cur.height, cur.width, 1);
    fbmatch::Tensor3 bg(cur.height, cur.width, 1);
    for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
            float best_fg = std::numeric_limits<float>::infinity();
            float best_bg = std::numeric_limits<float>::infinity();
            bool any_fg = false;
            bool any_bg = false;
            for (int ry = 0; ry < ref.height; ++ry) {
                for (int rx = 0; rx < ref.width; ++rx) {
                    if (ref_mask.at(ry, rx) == object) {
                        const float d = fbmatch::pixel_distance(
                            cur.pixel(y, x), ref.pixel(ry, rx), params.bias_fg);
                        if (d < best_fg) best_fg = d;
                        any_fg = true;
                    } else {
                        const float d = fbmatch::pixel_distance(
                            cur.pixel(y, x), ref.pixel(ry, rx), params.bias_bg);
                        if (d < best_bg) best_bg = d;
                        any_bg = true;
                    }
                }
            }
            fg.at(y, x, 0) = any_fg ? best_fg : 1.0f;
            bg.at(y, x, 0) = any_bg ? best_bg : 1.0f;
        }
    }
    return {std::move(fg), std::move(bg)};
}

// One window at a time, rescanning the neighbourhood from scratch.
inline std::pair<fbmatch::Tensor3, fbmatch::Tensor3> dense_local_window(
    const fbmatch::Tensor3& cur, const fbmatch::Tensor3& prev,
    const fbmatch::ObjectMask& prev_mask, int object, int k,
    fbmatch::MatchParams params) {
    fbmatch::Tensor3 fg(cur.height, cur.width, 1);
    fbmatch::Tensor3 bg(cur.height, cur.width, 1);
    for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
            float best_fg = std::numeric_limits<float>::infinity();
            float best_bg = std::numeric_limits<float>::infinity();
            bool any_fg = false;
            bool any_bg = false;
            for (int py = y - k; py <= y + k; ++py) {
                for (int px = x - k; px <= x + k; ++px) {
                    if (py < 0 || py >= prev.height || px < 0 ||
                        px >= prev.width)
                        continue;
                    if (prev_mask.at(py, px) == object) {
                        const float d = fbmatch::pixel_distance(
                            cur.pixel(y, x), prev.pixel(py, px),
                            params.bias_fg);
                        if (d < best_fg) best_fg = d;
                        any_fg = true;
                    } else {
                        const float d = fbmatch::pixel_distance(
                            cur.pixel(y, x), prev.pixel(py, px),
                            params.bias_bg);
                        if (d < best_bg) best_bg = d;
                        any_bg = true;
                    }
                }
            }
            fg.at(y, x, 0) = any_fg ? best_fg : 1.0f;
            bg.at(y, x, 0) = any_bg ? best_bg : 1.0f;
        }
    }
    return {std::move(fg), std::move(bg)};
}

// Random instance family used by the equivalence checks: small frames,
// few channels, up to three objects, biases in [-2, 2].
struct Instance {
    fbmatch::Tensor3 cur, ref, prev;
    fbmatch::ObjectMask ref_mask, prev_mask;
    int object = 1;
    fbmatch::MatchParams params;
};

inline Instance random_instance(fbmatch::Pcg32& rng) {
    Instance in;
    const int h = 2 + static_cast<int>(rng.next_below(15));  // 2..16
    const int w = 2 + static_cast<int>(rng.next_below(15));
    const int c = 1 + static_cast<int>(rng.next_below(8));  // 1..8
    const int objects = 1 + static_cast<int>(rng.next_below(3));
    in.cur = random_tensor(h, w, c, rng);
    in.ref = random_tensor(h, w, c, rng);
    in.prev = random_tensor(h, w, c, rng);
    in.ref_mask = random_mask(h, w, objects, rng);
    in.prev_mask = random_mask(h, w, objects, rng);
    in.object = 1 + static_cast<int>(rng.next_below(
                        static_cast<std::uint32_t>(objects)));
    in.params.bias_fg = static_cast<float>(rng.next_range(-2.0, 2.0));
    in.params.bias_bg = static_cast<float>(rng.next_range(-2.0, 2.0));
    return in;
}

// Exhaustive O(B^2) boundary F-measure with its own boundary extraction;
// everything in integer arithmetic until the final ratios.
inline double oracle_boundary_f(const fbmatch::ObjectMask& pred,
                                const fbmatch::ObjectMask& gt, int object,
                                double tol) {
    const auto boundary = [object](const fbmatch::ObjectMask& m) {
        std::vector<std::pair<int, int>> pts;
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x) {
                if (m.at(y, x) != object) continue;
                const bool b =
                    y == 0 || y == m.height - 1 || x == 0 || x == m.width - 1 ||
                    m.at(y - 1, x) != object || m.at(y + 1, x) != object ||
                    m.at(y, x - 1) != object || m.at(y, x + 1) != object;
                if (b) pts.emplace_back(y, x);
            }
        return pts;
    };
    const auto pb = boundary(pred);
    const auto gb = boundary(gt);
    if (pb.empty() && gb.empty()) return 1.0;
    if (pb.empty() || gb.empty()) return 0.0;

    const double tol2 = tol * tol;
    const auto matched = [tol2](const std::vector<std::pair<int, int>>& from,
                                const std::vector<std::pair<int, int>>& to) {
        std::size_t hit = 0;
        for (const auto& [fy, fx] : from) {
            long best = std::numeric_limits<long>::max();
            for (const auto& [ty, tx] : to) {
                const long dy = fy - ty;
                const long dx = fx - tx;
                best = std::min(best, dy * dy + dx * dx);
            }
            if (static_cast<double>(best) <= tol2) ++hit;
        }
        return static_cast<double>(hit) / static_cast<double>(from.size());
    };
    const double precision = matched(pb, gb);
    const double recall = matched(gb, pb);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace testutil

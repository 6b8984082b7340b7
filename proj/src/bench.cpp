#include "fbmatch/bench.hpp"

#include <algorithm>
#include <chrono>

#include "fbmatch/errors.hpp"
#include "fbmatch/rng.hpp"

namespace fbmatch {

namespace {

Tensor3 random_embedding(int h, int w, int c, Pcg32& rng) {
    Tensor3 t(h, w, c);
    for (auto& v : t.data)
        v = static_cast<float>(rng.next_range(-1.0, 1.0));
    return t;
}

ObjectMask random_mask(int h, int w, Pcg32& rng) {
    ObjectMask m(h, w);
    for (auto& l : m.labels) l = rng.next_u32() & 1u;
    return m;
}

template <typename F>
double median_ms(int repeats, F&& body) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    return times.size() % 2 ? times[mid]
                            : 0.5 * (times[mid - 1] + times[mid]);
}

}  // namespace

std::vector<BenchRow> run_bench(int height, int width, int channels,
                                const std::vector<int>& factors,
                                const std::vector<int>& windows, int repeats,
                                std::uint64_t seed) {
    if (height < 1 || width < 1 || channels < 1)
        throw DimensionMismatch("bench dimensions must be positive");
    if (repeats < 1) throw EmptyInput("bench needs at least one repeat");
    if (factors.empty()) throw EmptyInput("bench needs at least one factor");

    Pcg32 rng(seed);
    const Tensor3 cur = random_embedding(height, width, channels, rng);
    const Tensor3 ref = random_embedding(height, width, channels, rng);
    const ObjectMask mask = random_mask(height, width, rng);
    const MatchParams params{};

    std::vector<BenchRow> rows;
    for (const int factor : factors) {
        const AtrousSpec spec{factor, 0};

        BenchRow g;
        g.kind = "global";
        g.factor = factor;
        g.repeats = repeats;
        g.median_ms = median_ms(repeats, [&] {
            g.referred = global_match(cur, ref, mask, 1, params, spec).referred;
        });
        rows.push_back(g);

        if (!windows.empty()) {
            const WindowSet K = WindowSet::of(windows);
            BenchRow l;
            l.kind = "local";
            l.factor = factor;
            l.repeats = repeats;
            l.median_ms = median_ms(repeats, [&] {
                l.referred =
                    multi_local_match(cur, ref, mask, 1, K, params, spec)
                        .referred;
            });
            rows.push_back(l);
        }
    }
    return rows;
}

}  // namespace fbmatch

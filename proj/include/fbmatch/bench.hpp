#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbmatch/matching.hpp"

namespace fbmatch {

// One timed configuration. kind is "global" or "local"; median_ms is the
// median wall time over `repeats` runs of the full FG+BG matching.
struct BenchRow {
    std::string kind;
    int factor = 1;
    std::uint64_t referred = 0;
    double median_ms = 0.0;
    int repeats = 0;
};

// Synthesizes seeded random embeddings and a roughly half-foreground mask,
// then times global matching (and windowed matching when K is non-empty)
// for each thinning factor. Factors are timed in the given order; referred
// counts are taken from the kernels themselves and are deterministic.
std::vector<BenchRow> run_bench(int height, int width, int channels,
                                const std::vector<int>& factors,
                                const std::vector<int>& windows, int repeats,
                                std::uint64_t seed);

}  // namespace fbmatch

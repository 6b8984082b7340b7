#include "fbmatch/distance.hpp"

#include <cmath>
#include <string>

#include "fbmatch/errors.hpp"

namespace fbmatch {

double squared_distance(std::span<const float> a, std::span<const float> b) {
    const std::size_t n = a.size();
    // Eight independent accumulators expose enough parallelism for the
    // compiler to vectorize; the summation order is fixed by this source,
    // so every call site sees identical results for identical inputs.
    double acc[8] = {};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        for (std::size_t j = 0; j < 8; ++j) {
            const double d =
                static_cast<double>(a[i + j]) - static_cast<double>(b[i + j]);
            acc[j] += d * d;
        }
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        tail += d * d;
    }
    return (((acc[0] + acc[1]) + (acc[2] + acc[3])) +
            ((acc[4] + acc[5]) + (acc[6] + acc[7]))) +
           tail;
}

float biased_distance(double d2, float bias) {
    return static_cast<float>(std::tanh((d2 + bias) * 0.5));
}

float pixel_distance(std::span<const float> e_p, std::span<const float> e_q,
                     float bias) {
    if (e_p.size() != e_q.size())
        throw DimensionMismatch("embedding channel counts differ: " +
                                std::to_string(e_p.size()) + " vs " +
                                std::to_string(e_q.size()));
    return biased_distance(squared_distance(e_p, e_q), bias);
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace fbmatch

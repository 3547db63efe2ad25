#pragma once

#include <cstdint>

#include "selfsim/vec.hpp"

namespace selfsim {

/// splitmix64 generator.  Used instead of <random> engines so that sampled
/// test points and CLI output are bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Approximately standard normal (12-term Irwin-Hall; plenty for
    /// direction sampling).
    double normal() {
        double s = 0.0;
        for (int i = 0; i < 12; ++i) s += uniform();
        return s - 6.0;
    }

    /// Uniform sample from the closed Euclidean ball of given radius.
    Vec in_ball(const Vec& center, double radius) {
        const int n = center.dim();
        Vec dir(n);
        double norm = 0.0;
        do {
            for (int i = 0; i < n; ++i) dir[i] = normal();
            norm = dir.norm();
        } while (norm < 1e-12);
        const double r = radius * std::pow(uniform(), 1.0 / n);
        return center + (r / norm) * dir;
    }

private:
    std::uint64_t state_;
};

} // namespace selfsim

// Seeded random source for sample points and random coefficients.  The
// double-producing helpers are written out against the raw 64-bit stream so
// the same seed yields the same bytes on every platform and compiler.
#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace contactlab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform integer in [lo, hi] inclusive, rejection-free is not needed here.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    Eigen::VectorXd vector(int d, double lo, double hi) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    // Independent child stream; distinct labels give distinct streams.
    Rng fork(std::uint64_t label) {
        return Rng(next_u64() ^ (0x9e3779b97f4a7c15ULL * (label + 1)));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace contactlab

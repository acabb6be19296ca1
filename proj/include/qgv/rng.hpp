#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace qgv {

// Counter-based generator. Every output is a pure function of
// (seed, stream, counter), so runs are reproducible across platforms and
// independent streams can be split off for concurrent restarts.
//
// Output word k of stream s under seed x:
//   base = mix64(x ^ mul64(s + 1, 0x9E3779B97F4A7C15))
//   out  = mix64(base + mul64(k + 1, 0xBF58476D1CE4E5B9))
// where mix64 is the splitmix64 finalizer.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), counter_(0),
          base_(mix64(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)))) {}

    // Independent stream i of the same seed; pure function of (seed, i).
    Rng stream(std::uint64_t i) const { return Rng(seed_, i); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    std::uint64_t next_u64() {
        return mix64(base_ + 0xBF58476D1CE4E5B9ULL * (++counter_));
    }

    // Uniform on [0,1) with 53 bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; two uniforms per call, no cached state.
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Re and Im independent standard normals.
    std::complex<double> gaussian_complex() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_;
    std::uint64_t base_;
};

} // namespace qgv

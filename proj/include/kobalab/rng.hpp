#pragma once

#include <cstdint>

#include "kobalab/core.hpp"

namespace kobalab {

// splitmix64: tiny, fast, and bit-identical on every platform, which is
// what the byte-determinism contract of the experiment runner needs.
// (std::uniform_real_distribution is implementation-defined, so it is
// deliberately not used anywhere.)
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t x = (state_ += 0x9E3779B97F4A7C15ULL);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    Complex unit_circle() {
        double ang = uniform(0.0, 2.0 * pi);
        return {std::cos(ang), std::sin(ang)};
    }

    // uniform w.r.t. area in the disc of the given radius
    Complex in_disc(double radius) {
        double rho = radius * std::sqrt(uniform());
        return rho * unit_circle();
    }

    // uniform in the right half-plane box (0, re_max) x (-im_max, im_max)
    Complex in_halfplane_box(double re_max, double im_max) {
        return {uniform(0.0, re_max), uniform(-im_max, im_max)};
    }

    // rejection sampling in the ball of C^2, capped away from the sphere
    Point2 in_ball2(double max_norm = 0.995) {
        for (;;) {
            Point2 p{{uniform(-1.0, 1.0), uniform(-1.0, 1.0)},
                     {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}};
            if (norm_sq(p) < max_norm * max_norm) return p;
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace kobalab

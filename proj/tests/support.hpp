#pragma once

#include <cmath>
#include <random>

#include "mvno/market.hpp"

namespace support {

// Reference market used throughout the tests: two operators with a 60/40
// split, the cheaper one at 30, and a moderately WiFi-capable entrant.
inline mvno::MarketParams reference_market() {
    mvno::MarketParams p;
    p.q1 = 600;
    p.q2 = 400;
    p.p1 = 40;
    p.p2 = 30;
    p.c1 = 8;
    p.c2 = 6;
    p.ct1 = 4;
    p.ct2 = 3;
    p.cf1 = 0;
    p.cf2 = 0;
    p.eps = 0.5;
    p.gamma = 0.4;
    p.r0 = 10;
    p.ct0 = 2;
    p.cf0 = 0;
    return p;
}

inline double rel_gap(double reference, double value) {
    return std::abs(reference - value) / std::max(1.0, std::abs(reference));
}

// Plausible random markets; every draw satisfies the type invariants by
// construction (r0 is left at 0 for the caller to place against the
// thresholds of interest).
class MarketSampler {
  public:
    explicit MarketSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    mvno::MarketParams draw() {
        mvno::MarketParams p;
        p.q1 = log_uniform(100, 1500);
        p.q2 = log_uniform(100, 1500);
        p.p2 = log_uniform(10, 60);
        p.p1 = p.p2 * uniform(1.0, 1.5);
        p.c1 = p.p1 * uniform(0.05, 0.30);
        p.ct1 = p.p1 * uniform(0.05, 0.30);
        p.c2 = p.p2 * uniform(0.05, 0.30);
        p.ct2 = p.p2 * uniform(0.05, 0.30);
        p.cf1 = 0;
        p.cf2 = 0;
        p.eps = log_uniform(0.2, 1.5);
        p.gamma = uniform(0.05, 0.9);
        p.r0 = 0;
        p.ct0 = p.p2 * uniform(0.02, 0.15);
        p.cf0 = 0;
        p.validate();
        return p;
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

}  // namespace support

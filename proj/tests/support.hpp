#pragma once

// Helpers shared by the test executables: relative errors and seeded
// random draws for the property checks.

#include <cmath>
#include <cstdint>
#include <random>

namespace om::test {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

class Draw {
public:
    explicit Draw(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    // log-uniform on [lo, hi], both positive
    double log_uniform(double lo, double hi)
    {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return integer(0, 1) == 1; }

private:
    std::mt19937_64 gen_;
};

}  // namespace om::test

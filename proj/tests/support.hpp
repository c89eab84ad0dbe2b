#pragma once

#include "hessdamp/hessdamp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testutil {

using hessdamp::Vector;

inline Vector uniform_point(std::mt19937_64& rng, std::size_t d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector x(d);
    for (auto& v : x) v = u(rng);
    return x;
}

inline double dist(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double norm(const Vector& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Quadratic with b = 0 on a geometric spectrum: x* = 0, f* = 0.
inline hessdamp::SmoothObjective centered_quadratic(std::size_t d, double q, std::uint64_t seed, double L = 1.0) {
    const Vector spec = hessdamp::geometric_spectrum(d, q, L);
    const Vector b(d, 0.0);
    return hessdamp::quadratic_problem(spec, b, seed);
}

inline Vector seeded_start(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 7919 + 17);
    return uniform_point(rng, d, -1.0, 1.0);
}

}  // namespace testutil

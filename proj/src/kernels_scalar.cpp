#include "kernels_impl.hpp"

#include <cmath>

namespace hessdamp::kernels::detail {

double scalar_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double scalar_abs_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(x[i]);
    return acc;
}

void scalar_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scalar_axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scalar_gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = scalar_dot(m + r * cols, x, cols);
}

void scalar_gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) scalar_axpy(x[r], m + r * cols, y, cols);
}

void scalar_soft_threshold(const double* z, double t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(z[i]) - t;
        out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
    }
}

}  // namespace hessdamp::kernels::detail

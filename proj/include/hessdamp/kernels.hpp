#pragma once

// Dense vector kernels used by every solver inner loop.
//
// Two implementations exist: a portable scalar reference and an AVX2+FMA
// variant. The variant is chosen once at startup from CPUID; setting the
// environment variable HESSDAMP_KERNELS=scalar forces the reference path.
// Both must agree to a few ulps per reduction (see tests/test_kernels.cpp).

#include <cstddef>
#include <span>
#include <string_view>

namespace hessdamp::kernels {

struct KernelTable {
    std::string_view name;

    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i |x[i]|
    double (*abs_sum)(const double* x, std::size_t n);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // out[i] = a * x[i] + b * y[i]   (out may alias x or y)
    void (*axpby)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
    // y = M x with M row-major rows x cols
    void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
    // y = M^T x with M row-major rows x cols
    void (*gemv_t)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
    // out[i] = sign(z[i]) * max(|z[i]| - t, 0)
    void (*soft_threshold)(const double* z, double t, double* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the host CPU lacks AVX2/FMA or the build has no x86 variant.
const KernelTable* avx2_table() noexcept;

// The table selected at startup.
const KernelTable& active() noexcept;

// Span front ends over active(). Sizes must match; checked in debug builds only.
double dot(std::span<const double> x, std::span<const double> y) noexcept;
double norm_sq(std::span<const double> x) noexcept;
double norm(std::span<const double> x) noexcept;
double abs_sum(std::span<const double> x) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out) noexcept;
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) noexcept;
void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept;
void soft_threshold(std::span<const double> z, double t, std::span<double> out) noexcept;

}  // namespace hessdamp::kernels

#pragma once

#include <cstddef>

namespace hessdamp::kernels::detail {

double scalar_dot(const double* x, const double* y, std::size_t n);
double scalar_abs_sum(const double* x, std::size_t n);
void scalar_axpy(double a, const double* x, double* y, std::size_t n);
void scalar_axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void scalar_gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void scalar_gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void scalar_soft_threshold(const double* z, double t, double* out, std::size_t n);

#if defined(HESSDAMP_HAVE_AVX2)
double avx2_dot(const double* x, const double* y, std::size_t n);
double avx2_abs_sum(const double* x, std::size_t n);
void avx2_axpy(double a, const double* x, double* y, std::size_t n);
void avx2_axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void avx2_gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void avx2_gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void avx2_soft_threshold(const double* z, double t, double* out, std::size_t n);
#endif

}  // namespace hessdamp::kernels::detail

#include "hessdamp/kernels.hpp"

#include "kernels_impl.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <string_view>

namespace hessdamp::kernels {

namespace {

constexpr KernelTable kScalar{
    "scalar",
    &detail::scalar_dot,
    &detail::scalar_abs_sum,
    &detail::scalar_axpy,
    &detail::scalar_axpby,
    &detail::scalar_gemv,
    &detail::scalar_gemv_t,
    &detail::scalar_soft_threshold,
};

#if defined(HESSDAMP_HAVE_AVX2)
constexpr KernelTable kAvx2{
    "avx2",
    &detail::avx2_dot,
    &detail::avx2_abs_sum,
    &detail::avx2_axpy,
    &detail::avx2_axpby,
    &detail::avx2_gemv,
    &detail::avx2_gemv_t,
    &detail::avx2_soft_threshold,
};
#endif

bool cpu_has_avx2() noexcept {
#if defined(HESSDAMP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() noexcept {
    if (const char* forced = std::getenv("HESSDAMP_KERNELS")) {
        if (std::string_view(forced) == "scalar") return kScalar;
    }
    if (const KernelTable* simd = avx2_table()) return *simd;
    return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(HESSDAMP_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
    assert(x.size() == y.size());
    return active().dot(x.data(), y.data(), x.size());
}

double norm_sq(std::span<const double> x) noexcept { return dot(x, x); }

double norm(std::span<const double> x) noexcept { return std::sqrt(norm_sq(x)); }

double abs_sum(std::span<const double> x) noexcept { return active().abs_sum(x.data(), x.size()); }

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
    assert(x.size() == y.size());
    active().axpy(a, x.data(), y.data(), x.size());
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out) noexcept {
    assert(x.size() == y.size() && x.size() == out.size());
    active().axpby(a, x.data(), b, y.data(), out.data(), x.size());
}

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) noexcept {
    assert(m.size() == rows * cols && x.size() == cols && y.size() == rows);
    active().gemv(m.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept {
    assert(m.size() == rows * cols && x.size() == rows && y.size() == cols);
    active().gemv_t(m.data(), rows, cols, x.data(), y.data());
}

void soft_threshold(std::span<const double> z, double t, std::span<double> out) noexcept {
    assert(z.size() == out.size());
    active().soft_threshold(z.data(), t, out.data(), z.size());
}

}  // namespace hessdamp::kernels

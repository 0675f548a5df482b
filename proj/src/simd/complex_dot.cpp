#include "decohere/simd/complex_dot.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace decohere::simd {

namespace {

bool cpu_has_avx2() noexcept
{
#if defined(DECOHERE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<Backend>& active()
{
    static std::atomic<Backend> backend{best_backend()};
    return backend;
}

} // namespace

bool backend_available(Backend b) noexcept
{
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2: {
        static const bool ok = cpu_has_avx2();
        return ok;
    }
    }
    return false;
}

Backend best_backend() noexcept
{
    return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

void select_backend(Backend b)
{
    if (!backend_available(b))
        throw std::invalid_argument(std::string("SIMD backend not available: ") +
                                    std::string(backend_name(b)));
    active().store(b, std::memory_order_relaxed);
}

Backend active_backend() noexcept { return active().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend b) noexcept
{
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

std::complex<double> complex_dot(SplitComplexView a, SplitComplexView b) noexcept
{
#if defined(DECOHERE_HAVE_AVX2)
    if (active_backend() == Backend::Avx2) return complex_dot_avx2(a, b);
#endif
    return complex_dot_scalar(a, b);
}

} // namespace decohere::simd

// complex_dot.hpp: Σ_k a_k b_k over split (re, im) arrays, the inner loop
// of the memory integral. A scalar reference and vector variants share one
// signature; the active one is picked at startup from the CPU features.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace decohere::simd {

enum class Backend { Scalar, Avx2 };

struct SplitComplexView {
    std::span<const double> re;
    std::span<const double> im;

    std::size_t size() const noexcept { return re.size(); }
    SplitComplexView subview(std::size_t offset, std::size_t count) const noexcept {
        return {re.subspan(offset, count), im.subspan(offset, count)};
    }
};

// Reference kernel. Plain loop, no reassociation tricks.
std::complex<double> complex_dot_scalar(SplitComplexView a, SplitComplexView b) noexcept;

#if defined(DECOHERE_HAVE_AVX2)
// Requires AVX2 + FMA at runtime; call through complex_dot() unless the
// caller has checked backend_available(Backend::Avx2).
std::complex<double> complex_dot_avx2(SplitComplexView a, SplitComplexView b) noexcept;
#endif

bool backend_available(Backend b) noexcept;
Backend best_backend() noexcept;

// Process-wide selection; defaults to best_backend(). Throws if the requested
// backend is not available on this CPU/build.
void select_backend(Backend b);
Backend active_backend() noexcept;
std::string_view backend_name(Backend b) noexcept;

// Dispatches to the active backend. a and b must have equal sizes.
std::complex<double> complex_dot(SplitComplexView a, SplitComplexView b) noexcept;

} // namespace decohere::simd

#include "decohere/simd/complex_dot.hpp"

namespace decohere::simd {

std::complex<double> complex_dot_scalar(SplitComplexView a, SplitComplexView b) noexcept
{
    double re = 0.0, im = 0.0;
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        re += a.re[k] * b.re[k] - a.im[k] * b.im[k];
        im += a.re[k] * b.im[k] + a.im[k] * b.re[k];
    }
    return {re, im};
}

} // namespace decohere::simd

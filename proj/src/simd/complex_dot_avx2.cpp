#include "decohere/simd/complex_dot.hpp"

#include <immintrin.h>

namespace decohere::simd {

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

std::complex<double> complex_dot_avx2(SplitComplexView a, SplitComplexView b) noexcept
{
    const std::size_t n = a.size();
    const double* ar = a.re.data();
    const double* ai = a.im.data();
    const double* br = b.re.data();
    const double* bi = b.im.data();

    // two independent accumulator pairs to hide FMA latency
    __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
    __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();

    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        __m256d xr = _mm256_loadu_pd(ar + k), xi = _mm256_loadu_pd(ai + k);
        __m256d yr = _mm256_loadu_pd(br + k), yi = _mm256_loadu_pd(bi + k);
        re0 = _mm256_fmadd_pd(xr, yr, re0);
        re0 = _mm256_fnmadd_pd(xi, yi, re0);
        im0 = _mm256_fmadd_pd(xr, yi, im0);
        im0 = _mm256_fmadd_pd(xi, yr, im0);

        xr = _mm256_loadu_pd(ar + k + 4), xi = _mm256_loadu_pd(ai + k + 4);
        yr = _mm256_loadu_pd(br + k + 4), yi = _mm256_loadu_pd(bi + k + 4);
        re1 = _mm256_fmadd_pd(xr, yr, re1);
        re1 = _mm256_fnmadd_pd(xi, yi, re1);
        im1 = _mm256_fmadd_pd(xr, yi, im1);
        im1 = _mm256_fmadd_pd(xi, yr, im1);
    }
    if (k + 4 <= n) {
        const __m256d xr = _mm256_loadu_pd(ar + k), xi = _mm256_loadu_pd(ai + k);
        const __m256d yr = _mm256_loadu_pd(br + k), yi = _mm256_loadu_pd(bi + k);
        re0 = _mm256_fmadd_pd(xr, yr, re0);
        re0 = _mm256_fnmadd_pd(xi, yi, re0);
        im0 = _mm256_fmadd_pd(xr, yi, im0);
        im0 = _mm256_fmadd_pd(xi, yr, im0);
        k += 4;
    }
    double re = hsum(_mm256_add_pd(re0, re1));
    double im = hsum(_mm256_add_pd(im0, im1));
    for (; k < n; ++k) {
        re += ar[k] * br[k] - ai[k] * bi[k];
        im += ar[k] * bi[k] + ai[k] * br[k];
    }
    return {re, im};
}

} // namespace decohere::simd

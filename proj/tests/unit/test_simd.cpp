#include "doctest.h"

#include <random>
#include <vector>

#include "decohere/simd/complex_dot.hpp"

using namespace decohere::simd;

namespace {

struct Split {
    std::vector<double> re, im;
    SplitComplexView view() const { return {re, im}; }
};

Split random_split(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Split s{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        s.re[i] = u(rng);
        s.im[i] = u(rng);
    }
    return s;
}

// Σ |a_k| |b_k|, the scale of the rounding error of any summation order.
double magnitude(const Split& a, const Split& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.re.size(); ++i)
        m += std::hypot(a.re[i], a.im[i]) * std::hypot(b.re[i], b.im[i]);
    return m;
}

} // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar kernel is the plain complex sum")
{
    Split a{{1, 2, 3}, {0, -1, 0.5}}, b{{0.5, -1, 2}, {1, 1, -1}};
    std::complex<double> expect = 0;
    for (int i = 0; i < 3; ++i) expect += std::complex<double>(a.re[i], a.im[i]) * std::complex<double>(b.re[i], b.im[i]);
    CHECK(complex_dot_scalar(a.view(), b.view()) == expect);
    CHECK(complex_dot_scalar(Split{}.view(), Split{}.view()) == std::complex<double>(0.0));
}

TEST_CASE("backend selection")
{
    CHECK(backend_available(Backend::Scalar));
    CHECK(backend_available(best_backend()));
    const auto saved = active_backend();
    select_backend(Backend::Scalar);
    CHECK(active_backend() == Backend::Scalar);
    if (!backend_available(Backend::Avx2)) CHECK_THROWS(select_backend(Backend::Avx2));
    select_backend(saved);
    CHECK(backend_name(Backend::Scalar) == "scalar");
    CHECK(backend_name(Backend::Avx2) == "avx2");
}

#if defined(DECOHERE_HAVE_AVX2)
TEST_CASE("avx2 kernel matches the scalar reference")
{
    if (!backend_available(Backend::Avx2)) {
        MESSAGE("AVX2 not available on this CPU, skipping");
        return;
    }
    std::mt19937_64 rng(2024);
    std::vector<std::size_t> sizes;
    for (std::size_t n = 0; n <= 67; ++n) sizes.push_back(n);
    sizes.insert(sizes.end(), {1000, 2501, 10007});
    for (std::size_t n : sizes) {
        const auto a = random_split(rng, n), b = random_split(rng, n);
        const auto s = complex_dot_scalar(a.view(), b.view());
        const auto v = complex_dot_avx2(a.view(), b.view());
        INFO("n=", n);
        CHECK(std::abs(s - v) <= 1e-15 * (1.0 + magnitude(a, b)));
    }
}

TEST_CASE("avx2 kernel on unaligned subviews")
{
    if (!backend_available(Backend::Avx2)) return;
    std::mt19937_64 rng(7);
    const auto a = random_split(rng, 300), b = random_split(rng, 300);
    for (std::size_t off = 0; off < 9; ++off)
        for (std::size_t len : {0, 1, 7, 8, 9, 31, 200}) {
            const auto av = a.view().subview(off, len), bv = b.view().subview(off + 3, len);
            const auto s = complex_dot_scalar(av, bv);
            CHECK(std::abs(s - complex_dot_avx2(av, bv)) <= 1e-14 * (1.0 + double(len)));
        }
}
#endif

TEST_CASE("dispatch follows the active backend")
{
    std::mt19937_64 rng(3);
    const auto a = random_split(rng, 123), b = random_split(rng, 123);
    const auto saved = active_backend();
    select_backend(Backend::Scalar);
    CHECK(complex_dot(a.view(), b.view()) == complex_dot_scalar(a.view(), b.view()));
    select_backend(saved);
}

}

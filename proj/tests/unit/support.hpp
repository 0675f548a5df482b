#pragma once

#include <random>

#include "decohere/model.hpp"

namespace testing {

inline decohere::Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index m)
{
    std::normal_distribution<double> g;
    decohere::Matrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = {g(rng), g(rng)};
    return 0.5 * (a + a.adjoint());
}

inline decohere::RealMatrix random_symmetric(std::mt19937_64& rng, Eigen::Index m)
{
    std::normal_distribution<double> g;
    decohere::RealMatrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = g(rng);
    return 0.5 * (a + a.transpose());
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace testing

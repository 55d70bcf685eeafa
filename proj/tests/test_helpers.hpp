#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>
#include <stdexcept>
#include <vector>

#include "wastefactor/core.hpp"

namespace wftest {

inline bool rel_close(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(a - b) <= tol * scale;
}

/// Log-uniform draw in [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline std::vector<wastefactor::Stage> random_cascade(std::mt19937_64& rng, int min_len = 1, int max_len = 8) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_real_distribution<double> w(1.0, 100.0);
    std::vector<wastefactor::Stage> stages;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) stages.emplace_back(w(rng), log_uniform(rng, 1e-6, 1e6));
    return stages;
}

}  // namespace wftest

#pragma once

// Test-only reference computation of the Gaussian similarity. Kept
// deliberately independent of the library: plain index loops, long double
// accumulation in reverse call order.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline long double similarity(const std::vector<double>& a, const std::vector<double>& b,
                              long double sigma) {
    long double sum = 0.0L;
    unsigned long active = 0;
    for (std::size_t s = a.size(); s-- > 0;) {
        if (a[s] > 0.0 || b[s] > 0.0) {
            const long double z = (static_cast<long double>(a[s]) - b[s]) / sigma;
            sum += std::exp(-(z * z));
            ++active;
        }
    }
    if (active == 0) return 1.0L;
    return (1.0L + sum / active) / 2.0L;
}

inline long double dist(const std::vector<double>& a, const std::vector<double>& b,
                        long double sigma) {
    return 1.0L - similarity(a, b, sigma);
}

}  // namespace oracle

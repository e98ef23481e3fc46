#pragma once

#include <algorithm>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace specgeo::detail {

// Exact binomial; each intermediate division is exact (C(a-b+i, i) is integral).
inline boost::multiprecision::cpp_int binom(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    boost::multiprecision::cpp_int r = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        r *= a - b + i;
        r /= i;
    }
    return r;
}

} // namespace specgeo::detail

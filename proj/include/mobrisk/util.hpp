#pragma once

#include <cmath>
#include <cstddef>
#include <string>

namespace mobrisk {

// ceil(fraction * n) where `fraction` stands for a short decimal the user
// typed (0.1, 0.25, ...). The product is computed in doubles, so a literal
// std::ceil would turn 0.1 * 20 = 2.0000000000000004 into 3; the slack
// absorbs that representation error without affecting genuine non-integers.
inline std::size_t ceil_fraction(double fraction, std::size_t n) {
    double raw = fraction * static_cast<double>(n);
    double adjusted = std::ceil(raw - 1e-9);
    if (adjusted < 0.0) return 0;
    std::size_t k = static_cast<std::size_t>(adjusted);
    return k > n ? n : k;
}

// Shortest-width decimal that round-trips, so equal doubles always print the
// same bytes.
std::string format_double(double value);

}  // namespace mobrisk

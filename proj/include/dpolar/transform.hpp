#pragma once

#include <cstddef>

#include "dpolar/bits.hpp"

namespace dpolar {

// In-place butterfly for x = u * F^{(x) n}, F = [[1,0],[1,1]], natural order
// (no bit-reversal anywhere in this codebase). Stage s xors position i+2^s
// into position i inside each block of 2^{s+1}. The transform is an
// involution, so the same routine both encodes and inverts.
inline void polar_transform_inplace(BitBlock& u) {
    std::size_t n = u.size();
    if (n == 0) throw std::invalid_argument("polar_transform: empty block");
    (void)log2_exact(n);
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t base = 0; base < n; base += 2 * half) {
            for (std::size_t i = base; i < base + half; ++i) {
                u[i] = u[i] ^ u[i + half];
            }
        }
    }
}

inline BitBlock polar_transform(BitBlock u) {
    polar_transform_inplace(u);
    return u;
}

}  // namespace dpolar

#pragma once

#include <cmath>
#include <stdexcept>

#include "specmon/iq.hpp"

namespace specmon {

inline bool is_pow2(size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey. Unscaled forward transform;
// inverse applies the 1/N factor.
void fft_inplace(cvec& x, bool inverse = false);

inline cvec fft(cvec x) {
    fft_inplace(x, false);
    return x;
}

inline cvec ifft(cvec x) {
    fft_inplace(x, true);
    return x;
}

}  // namespace specmon

#pragma once

#include <complex>
#include <vector>

namespace specmon {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Complex baseband sample sequence; the common currency between synthesis,
// channel impairment, and feature extraction.
struct IQSignal {
    cvec samples;
    double sample_rate_hz = 0.0;

    size_t size() const { return samples.size(); }
};

inline double mean_power(const cvec& s) {
    double acc = 0.0;
    for (const cplx& x : s) acc += std::norm(x);
    return s.empty() ? 0.0 : acc / static_cast<double>(s.size());
}

inline double mean_power(const IQSignal& s) { return mean_power(s.samples); }

// Scale to unit mean power; no-op on silence.
inline void normalize_power(cvec& s) {
    const double p = mean_power(s);
    if (p <= 0.0) return;
    const double g = 1.0 / std::sqrt(p);
    for (cplx& x : s) x *= g;
}

}  // namespace specmon

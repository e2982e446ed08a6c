#pragma once

#include <cstdint>
#include <limits>

#include "specmon/iq.hpp"

namespace specmon {

enum class FadingKind : uint8_t { NONE = 0, RAYLEIGH = 1, RICIAN = 2 };

const char* to_string(FadingKind k);

constexpr double kSnrInfinity = std::numeric_limits<double>::infinity();

// One draw of the five impairments applied by impair(), in fixed order:
// fading -> CFO -> phase -> IQ imbalance -> AWGN.
struct ImpairmentConfig {
    double snr_db = kSnrInfinity;       // +inf: no noise
    double phase_offset_rad = 0.0;      // [-pi, pi]
    double freq_offset_hz = 0.0;        // [-5000, 5000]
    double iq_imbalance_db = 0.0;       // [0, 3]
    FadingKind fading = FadingKind::NONE;
    uint64_t seed = 0;
};

IQSignal add_awgn(const IQSignal& sig, double snr_db, uint64_t seed);
IQSignal apply_cfo(const IQSignal& sig, double freq_offset_hz);
IQSignal apply_phase(const IQSignal& sig, double phase_offset_rad);
IQSignal apply_iq_imbalance(const IQSignal& sig, double imbalance_db);

// Static 3-tap block fading, delays {0, 5, 12} samples, average tap powers
// {0, -3, -6} dB, renormalized to unit total power. RICIAN puts a K = 4 dB
// line-of-sight component on tap 0.
IQSignal apply_fading(const IQSignal& sig, FadingKind kind, uint64_t seed);

IQSignal impair(const IQSignal& sig, const ImpairmentConfig& cfg);

}  // namespace specmon

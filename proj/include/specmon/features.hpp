#pragma once

#include <cstdint>
#include <vector>

#include "specmon/iq.hpp"

namespace specmon {

enum class FeatureKind : uint8_t { FFT_MAG = 0, PSD_DB = 1 };

const char* to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

// Real vector in [0, 1] after per-signal min-max normalization; the input
// representation for both networks.
struct FeatureVector {
    std::vector<double> values;
    FeatureKind kind = FeatureKind::FFT_MAG;
    size_t nfft = 0;
};

// (v - min) / (max - min); constant vectors map to all zeros.
std::vector<double> minmax_normalize(const std::vector<double>& v);

// Magnitude of the nfft-point DFT of the first nfft samples (zero padded),
// min-max normalized.
FeatureVector fft_mag(const IQSignal& sig, size_t nfft);

// Welch PSD in dB: Hann windows of length nfft, 50% overlap, averaged
// periodograms, floored at -120 dB, min-max normalized. A single-periodogram
// mode is available for ablation.
FeatureVector psd_db(const IQSignal& sig, size_t nfft, bool welch = true);

}  // namespace specmon

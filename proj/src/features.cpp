#include "specmon/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specmon/fft.hpp"

namespace specmon {

namespace {
constexpr double kDbFloor = -120.0;

void check_nfft(size_t nfft) {
    if (nfft < 2 || !is_pow2(nfft)) {
        throw std::invalid_argument("nfft must be a power of two >= 2");
    }
}
}  // namespace

const char* to_string(FeatureKind k) {
    return k == FeatureKind::FFT_MAG ? "fft_mag" : "psd_db";
}

FeatureKind feature_kind_from_string(const std::string& s) {
    if (s == "fft_mag") return FeatureKind::FFT_MAG;
    if (s == "psd_db") return FeatureKind::PSD_DB;
    throw std::invalid_argument("unknown feature kind: " + s);
}

std::vector<double> minmax_normalize(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("minmax_normalize: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<double> out(v.size());
    if (mx == mn) return out;  // constant vector -> all zeros
    const double inv = 1.0 / (mx - mn);
    for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mn) * inv;
    return out;
}

FeatureVector fft_mag(const IQSignal& sig, size_t nfft) {
    check_nfft(nfft);
    if (sig.samples.empty()) throw std::invalid_argument("fft_mag: empty input");

    cvec x(nfft, cplx(0, 0));
    const size_t n = std::min(nfft, sig.samples.size());
    std::copy(sig.samples.begin(), sig.samples.begin() + static_cast<long>(n), x.begin());
    fft_inplace(x, false);

    std::vector<double> mag(nfft);
    for (size_t k = 0; k < nfft; ++k) mag[k] = std::abs(x[k]);
    return FeatureVector{minmax_normalize(mag), FeatureKind::FFT_MAG, nfft};
}

FeatureVector psd_db(const IQSignal& sig, size_t nfft, bool welch) {
    check_nfft(nfft);
    if (sig.samples.size() < nfft) {
        throw std::invalid_argument("psd_db: insufficient samples");
    }

    std::vector<double> win(nfft);
    double wpow = 0.0;
    for (size_t i = 0; i < nfft; ++i) {
        win[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                       static_cast<double>(nfft)));
        wpow += win[i] * win[i];
    }

    const size_t hop = nfft / 2;
    const size_t nseg = welch ? (sig.samples.size() - nfft) / hop + 1 : 1;

    std::vector<double> psd(nfft, 0.0);
    cvec x(nfft);
    for (size_t s = 0; s < nseg; ++s) {
        const size_t off = s * hop;
        for (size_t i = 0; i < nfft; ++i) x[i] = sig.samples[off + i] * win[i];
        fft_inplace(x, false);
        for (size_t k = 0; k < nfft; ++k) psd[k] += std::norm(x[k]);
    }
    const double scale = 1.0 / (static_cast<double>(nseg) * wpow);
    for (size_t k = 0; k < nfft; ++k) {
        const double p = psd[k] * scale;
        psd[k] = std::max(kDbFloor, 10.0 * std::log10(p > 0.0 ? p : 0.0));
    }
    return FeatureVector{minmax_normalize(psd), FeatureKind::PSD_DB, nfft};
}

}  // namespace specmon

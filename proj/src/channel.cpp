#include "specmon/channel.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "specmon/rng.hpp"

namespace specmon {

const char* to_string(FadingKind k) {
    switch (k) {
        case FadingKind::NONE: return "none";
        case FadingKind::RAYLEIGH: return "rayleigh";
        case FadingKind::RICIAN: return "rician";
    }
    return "?";
}

IQSignal add_awgn(const IQSignal& sig, double snr_db, uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return sig;
    const double p = mean_power(sig);
    if (p <= 0.0) throw std::invalid_argument("add_awgn: signal has no power");
    const double noise_var = p / std::pow(10.0, snr_db / 10.0);
    const double s = std::sqrt(noise_var / 2.0);

    Rng rng(seed);
    IQSignal out = sig;
    for (cplx& x : out.samples) {
        x += cplx(s * rng.normal(), s * rng.normal());
    }
    return out;
}

IQSignal apply_cfo(const IQSignal& sig, double freq_offset_hz) {
    if (std::abs(freq_offset_hz) >= sig.sample_rate_hz / 2.0) {
        throw std::invalid_argument("apply_cfo: offset beyond Nyquist");
    }
    IQSignal out = sig;
    const double w = 2.0 * M_PI * freq_offset_hz / sig.sample_rate_hz;
    for (size_t k = 0; k < out.samples.size(); ++k) {
        out.samples[k] *= cplx(std::cos(w * static_cast<double>(k)),
                               std::sin(w * static_cast<double>(k)));
    }
    return out;
}

IQSignal apply_phase(const IQSignal& sig, double phase_offset_rad) {
    IQSignal out = sig;
    const cplx rot(std::cos(phase_offset_rad), std::sin(phase_offset_rad));
    for (cplx& x : out.samples) x *= rot;
    return out;
}

IQSignal apply_iq_imbalance(const IQSignal& sig, double imbalance_db) {
    if (imbalance_db < 0.0) {
        throw std::invalid_argument("apply_iq_imbalance: negative imbalance");
    }
    const double g = std::pow(10.0, imbalance_db / 20.0);
    IQSignal out = sig;
    for (cplx& x : out.samples) x = cplx(x.real(), g * x.imag());
    return out;
}

IQSignal apply_fading(const IQSignal& sig, FadingKind kind, uint64_t seed) {
    if (kind == FadingKind::NONE) {
        throw std::invalid_argument("apply_fading: kind must be RAYLEIGH or RICIAN");
    }
    static constexpr std::array<size_t, 3> delays = {0, 5, 12};
    static constexpr std::array<double, 3> powers_db = {0.0, -3.0, -6.0};

    Rng rng(seed);
    std::array<cplx, 3> taps;
    for (size_t i = 0; i < 3; ++i) {
        const double p = std::pow(10.0, powers_db[i] / 10.0);
        const double s = std::sqrt(p / 2.0);
        taps[i] = cplx(s * rng.normal(), s * rng.normal());
    }
    if (kind == FadingKind::RICIAN) {
        // K = 4 dB line-of-sight on tap 0
        const double kf = std::pow(10.0, 4.0 / 10.0);
        const double p0 = std::pow(10.0, powers_db[0] / 10.0);
        const double s = std::sqrt(p0 / (2.0 * (kf + 1.0)));
        taps[0] = cplx(std::sqrt(p0 * kf / (kf + 1.0)) + s * rng.normal(), s * rng.normal());
    }

    double total = 0.0;
    for (const cplx& t : taps) total += std::norm(t);
    const double g = 1.0 / std::sqrt(total);
    for (cplx& t : taps) t *= g;

    IQSignal out;
    out.sample_rate_hz = sig.sample_rate_hz;
    out.samples.assign(sig.samples.size(), cplx(0, 0));
    for (size_t i = 0; i < 3; ++i) {
        for (size_t k = delays[i]; k < sig.samples.size(); ++k) {
            out.samples[k] += taps[i] * sig.samples[k - delays[i]];
        }
    }
    return out;
}

IQSignal impair(const IQSignal& sig, const ImpairmentConfig& cfg) {
    IQSignal s = sig;
    if (cfg.fading != FadingKind::NONE) {
        s = apply_fading(s, cfg.fading, derive_seed(cfg.seed, 1));
    }
    if (cfg.freq_offset_hz != 0.0) s = apply_cfo(s, cfg.freq_offset_hz);
    if (cfg.phase_offset_rad != 0.0) s = apply_phase(s, cfg.phase_offset_rad);
    if (cfg.iq_imbalance_db != 0.0) s = apply_iq_imbalance(s, cfg.iq_imbalance_db);
    if (!(std::isinf(cfg.snr_db) && cfg.snr_db > 0)) {
        s = add_awgn(s, cfg.snr_db, derive_seed(cfg.seed, 2));
    }
    return s;
}

}  // namespace specmon

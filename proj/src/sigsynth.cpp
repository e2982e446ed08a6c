#include "specmon/sigsynth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specmon/fft.hpp"
#include "specmon/rng.hpp"

namespace specmon {

namespace {

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

cvec make_psk(size_t order) {
    cvec pts(order);
    for (size_t k = 0; k < order; ++k) {
        const double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(order);
        pts[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return pts;
}

// Square QAM with Gray-agnostic ordering, scaled to unit average energy.
cvec make_qam(size_t order) {
    const size_t side = static_cast<size_t>(std::lround(std::sqrt(static_cast<double>(order))));
    cvec pts;
    pts.reserve(order);
    double energy = 0.0;
    for (size_t i = 0; i < side; ++i) {
        for (size_t q = 0; q < side; ++q) {
            const double re = 2.0 * static_cast<double>(i) - static_cast<double>(side - 1);
            const double im = 2.0 * static_cast<double>(q) - static_cast<double>(side - 1);
            pts.emplace_back(re, im);
            energy += re * re + im * im;
        }
    }
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(order));
    for (cplx& p : pts) p *= scale;
    return pts;
}

// Root-raised-cosine impulse response sample at time t (in symbol periods).
double rrc_tap(double t, double beta) {
    const double eps = 1e-10;
    if (std::abs(t) < eps) {
        return 1.0 + beta * (4.0 / M_PI - 1.0);
    }
    const double denom_sing = 1.0 / (4.0 * beta);
    if (std::abs(std::abs(t) - denom_sing) < eps) {
        const double a = (1.0 + 2.0 / M_PI) * std::sin(M_PI / (4.0 * beta));
        const double b = (1.0 - 2.0 / M_PI) * std::cos(M_PI / (4.0 * beta));
        return beta / std::sqrt(2.0) * (a + b);
    }
    const double num = std::sin(M_PI * t * (1.0 - beta)) +
                       4.0 * beta * t * std::cos(M_PI * t * (1.0 + beta));
    const double den = M_PI * t * (1.0 - 16.0 * beta * beta * t * t);
    return num / den;
}

std::vector<double> rrc_taps(size_t sps, double beta, size_t span_symbols) {
    const size_t ntaps = sps * span_symbols + 1;
    std::vector<double> h(ntaps);
    const double mid = static_cast<double>(ntaps - 1) / 2.0;
    double e = 0.0;
    for (size_t i = 0; i < ntaps; ++i) {
        const double t = (static_cast<double>(i) - mid) / static_cast<double>(sps);
        h[i] = rrc_tap(t, beta);
        e += h[i] * h[i];
    }
    const double g = 1.0 / std::sqrt(e);
    for (double& v : h) v *= g;
    return h;
}

// Real Gaussian noise band-limited by a frequency-domain brick wall at
// cutoff_hz; scaled to unit peak magnitude.
std::vector<double> bandlimited_message(size_t n, double fs, double cutoff_hz, Rng& rng) {
    const size_t m = next_pow2(n);
    cvec x(m);
    for (size_t i = 0; i < m; ++i) x[i] = cplx(rng.normal(), 0.0);
    fft_inplace(x, false);
    const size_t cut = static_cast<size_t>(cutoff_hz / fs * static_cast<double>(m));
    for (size_t k = cut + 1; k + cut < m; ++k) x[k] = 0.0;
    fft_inplace(x, true);
    std::vector<double> msg(n);
    double peak = 0.0;
    for (size_t i = 0; i < n; ++i) {
        msg[i] = x[i].real();
        peak = std::max(peak, std::abs(msg[i]));
    }
    if (peak > 0.0) {
        for (double& v : msg) v /= peak;
    }
    return msg;
}

IQSignal finish(cvec samples, double fs) {
    normalize_power(samples);
    return IQSignal{std::move(samples), fs};
}

}  // namespace

const char* to_string(WaveformClass c) {
    switch (c) {
        case WaveformClass::SC: return "SC";
        case WaveformClass::SCFDMA: return "SCFDMA";
        case WaveformClass::OFDM: return "OFDM";
        case WaveformClass::LFM: return "LFM";
        case WaveformClass::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

const char* to_string(UnknownKind k) {
    switch (k) {
        case UnknownKind::AM: return "AM";
        case UnknownKind::FM: return "FM";
        case UnknownKind::BLE: return "BLE";
        case UnknownKind::WHITE_NOISE: return "WHITE_NOISE";
    }
    return "?";
}

const char* to_string(ModulationScheme m) {
    switch (m) {
        case ModulationScheme::BPSK: return "BPSK";
        case ModulationScheme::QPSK: return "QPSK";
        case ModulationScheme::PSK16: return "16-PSK";
        case ModulationScheme::PSK64: return "64-PSK";
        case ModulationScheme::QAM4: return "4-QAM";
        case ModulationScheme::QAM16: return "16-QAM";
        case ModulationScheme::QAM64: return "64-QAM";
        case ModulationScheme::QAM256: return "256-QAM";
    }
    return "?";
}

size_t SignalSpec::num_samples() const {
    const double n = duration_s * sample_rate_hz;
    const double r = std::round(n);
    if (r < 1.0 || std::abs(n - r) > 1e-6) {
        throw std::invalid_argument("SignalSpec: duration x sample rate must be a positive integer");
    }
    return static_cast<size_t>(r);
}

const cvec& constellation(ModulationScheme m) {
    static const cvec bpsk = {cplx(1, 0), cplx(-1, 0)};
    static const cvec qpsk = make_psk(4);
    static const cvec psk16 = make_psk(16);
    static const cvec psk64 = make_psk(64);
    static const cvec qam4 = make_qam(4);
    static const cvec qam16 = make_qam(16);
    static const cvec qam64 = make_qam(64);
    static const cvec qam256 = make_qam(256);
    switch (m) {
        case ModulationScheme::BPSK: return bpsk;
        case ModulationScheme::QPSK: return qpsk;
        case ModulationScheme::PSK16: return psk16;
        case ModulationScheme::PSK64: return psk64;
        case ModulationScheme::QAM4: return qam4;
        case ModulationScheme::QAM16: return qam16;
        case ModulationScheme::QAM64: return qam64;
        case ModulationScheme::QAM256: return qam256;
    }
    throw std::invalid_argument("unknown modulation scheme");
}

cvec gen_symbols(ModulationScheme m, size_t count, uint64_t seed) {
    const cvec& pts = constellation(m);
    Rng rng(seed);
    cvec out(count);
    for (size_t i = 0; i < count; ++i) {
        out[i] = pts[rng.uniform_int(pts.size())];
    }
    return out;
}

IQSignal gen_sc(const SignalSpec& spec) {
    if (spec.waveform_class != WaveformClass::SC) {
        throw std::invalid_argument("gen_sc: spec class mismatch");
    }
    const size_t n = spec.num_samples();
    const size_t sps = kScSamplesPerSymbol;
    const std::vector<double> h = rrc_taps(sps, kScRollOff, kScFilterSpanSymbols);
    const size_t delay = (h.size() - 1) / 2;

    const size_t nsym = (n + delay) / sps + kScFilterSpanSymbols + 2;
    const cvec sym = gen_symbols(spec.modulation, nsym, spec.seed);

    // polyphase: out[k] = sum_m sym[m] * h[k + delay - sps*m]
    cvec out(n, cplx(0, 0));
    for (size_t k = 0; k < n; ++k) {
        const size_t kk = k + delay;
        const size_t m_hi = kk / sps;
        for (size_t m = m_hi + 1; m-- > 0;) {
            const size_t tap = kk - sps * m;
            if (tap >= h.size()) break;
            out[k] += sym[m] * h[tap];
        }
    }
    return finish(std::move(out), spec.sample_rate_hz);
}

IQSignal gen_multicarrier(const SignalSpec& spec, bool dft_precode) {
    const size_t n = spec.num_samples();
    const size_t nfft = kOfdmFftSize;
    const size_t nact = kOfdmActiveCarriers;
    const size_t cp = kOfdmCpLen;
    const size_t sym_len = nfft + cp;
    const size_t nsyms = (n + sym_len - 1) / sym_len;

    const cvec data = gen_symbols(spec.modulation, nsyms * nact, spec.seed);
    cvec out;
    out.reserve(nsyms * sym_len);

    for (size_t s = 0; s < nsyms && out.size() < n; ++s) {
        cvec d(data.begin() + static_cast<long>(s * nact),
               data.begin() + static_cast<long>((s + 1) * nact));
        if (dft_precode) {
            fft_inplace(d, false);
            const double g = 1.0 / std::sqrt(static_cast<double>(nact));
            for (cplx& v : d) v *= g;
        }
        // map onto the centered 128 of 256 carriers: baseband freqs -64..63
        cvec grid(nfft, cplx(0, 0));
        for (size_t i = 0; i < nact; ++i) {
            const long k = static_cast<long>(i) - static_cast<long>(nact / 2);
            const size_t bin = static_cast<size_t>((k + static_cast<long>(nfft)) % static_cast<long>(nfft));
            grid[bin] = d[i];
        }
        fft_inplace(grid, true);
        for (size_t i = 0; i < cp && out.size() < n; ++i) out.push_back(grid[nfft - cp + i]);
        for (size_t i = 0; i < nfft && out.size() < n; ++i) out.push_back(grid[i]);
    }
    return finish(std::move(out), spec.sample_rate_hz);
}

IQSignal gen_ofdm(const SignalSpec& spec) {
    if (spec.waveform_class != WaveformClass::OFDM) {
        throw std::invalid_argument("gen_ofdm: spec class mismatch");
    }
    return gen_multicarrier(spec, false);
}

IQSignal gen_scfdma(const SignalSpec& spec) {
    if (spec.waveform_class != WaveformClass::SCFDMA) {
        throw std::invalid_argument("gen_scfdma: spec class mismatch");
    }
    return gen_multicarrier(spec, true);
}

IQSignal gen_lfm(const SignalSpec& spec) {
    if (spec.waveform_class != WaveformClass::LFM) {
        throw std::invalid_argument("gen_lfm: spec class mismatch");
    }
    const size_t n = spec.num_samples();
    const double fs = spec.sample_rate_hz;
    const double bw = spec.bandwidth_hz;
    const double chirp_t = static_cast<double>(kLfmChirpLen) / fs;
    const double rate = bw / chirp_t;  // Hz per second sweep

    cvec out(n);
    for (size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k % kLfmChirpLen) / fs;
        const double phase = 2.0 * M_PI * (-0.5 * bw * t + 0.5 * rate * t * t);
        out[k] = cplx(std::cos(phase), std::sin(phase));
    }
    return finish(std::move(out), spec.sample_rate_hz);
}

IQSignal gen_unknown(UnknownKind kind, const SignalSpec& spec) {
    const size_t n = spec.num_samples();
    const double fs = spec.sample_rate_hz;
    Rng rng(spec.seed);
    cvec out(n);

    switch (kind) {
        case UnknownKind::AM: {
            // DSB with carrier, modulation index 0.8
            const std::vector<double> msg = bandlimited_message(n, fs, 10e6, rng);
            for (size_t k = 0; k < n; ++k) out[k] = cplx(1.0 + 0.8 * msg[k], 0.0);
            break;
        }
        case UnknownKind::FM: {
            const std::vector<double> msg = bandlimited_message(n, fs, 10e6, rng);
            const double fdev = 20e6;
            double phase = 0.0;
            for (size_t k = 0; k < n; ++k) {
                out[k] = cplx(std::cos(phase), std::sin(phase));
                phase += 2.0 * M_PI * fdev * msg[k] / fs;
            }
            break;
        }
        case UnknownKind::BLE: {
            // GFSK frequency-hopping stand-in: BT 0.5, h = 0.5, 1 Msym/s,
            // hopping among 40 2-MHz channels every 625 us.
            const size_t sps = static_cast<size_t>(std::lround(fs / kBleSymbolRate));
            const size_t nsym = n / sps + 8;
            std::vector<double> bits(nsym);
            for (double& b : bits) b = rng.uniform_int(2) ? 1.0 : -1.0;

            // gaussian pulse, span 4 symbols
            const double bt = 0.5;
            const double sigma = std::sqrt(std::log(2.0)) / (2.0 * M_PI * bt);  // in symbols
            const size_t span = 4 * sps;
            std::vector<double> g(2 * span + 1);
            double gsum = 0.0;
            for (size_t i = 0; i < g.size(); ++i) {
                const double t = (static_cast<double>(i) - static_cast<double>(span)) /
                                 static_cast<double>(sps);
                g[i] = std::exp(-t * t / (2.0 * sigma * sigma));
                gsum += g[i];
            }
            for (double& v : g) v /= gsum / static_cast<double>(sps);  // unit area per symbol

            const size_t hop_len = static_cast<size_t>(std::lround(kBleHopPeriodS * fs));
            const size_t nhops = n / hop_len + 1;
            std::vector<double> hop_freq(nhops);
            for (double& f : hop_freq) {
                const double ch = static_cast<double>(rng.uniform_int(kBleNumChannels));
                f = (ch - (static_cast<double>(kBleNumChannels) - 1.0) / 2.0) * kBleChannelSpacingHz;
            }

            const double h = 0.5;
            double phase = 0.0;
            for (size_t k = 0; k < n; ++k) {
                // filtered NRZ at sample k
                double f_inst = 0.0;
                const long lo = static_cast<long>(k) - static_cast<long>(span);
                for (long i = lo; i <= static_cast<long>(k) + static_cast<long>(span); ++i) {
                    if (i < 0) continue;
                    const size_t m = static_cast<size_t>(i) / sps;
                    if (static_cast<size_t>(i) % sps == 0 && m < bits.size()) {
                        f_inst += bits[m] * g[static_cast<size_t>(static_cast<long>(k) - i + static_cast<long>(span))];
                    }
                }
                const double fc = hop_freq[k / hop_len];
                out[k] = cplx(std::cos(phase), std::sin(phase));
                phase += M_PI * h * f_inst / static_cast<double>(sps) +
                         2.0 * M_PI * fc / fs;
            }
            break;
        }
        case UnknownKind::WHITE_NOISE: {
            const double s = 1.0 / std::sqrt(2.0);
            for (size_t k = 0; k < n; ++k) out[k] = cplx(s * rng.normal(), s * rng.normal());
            break;
        }
    }
    return finish(std::move(out), fs);
}

IQSignal gen_signal(const SignalSpec& spec) {
    switch (spec.waveform_class) {
        case WaveformClass::SC: return gen_sc(spec);
        case WaveformClass::SCFDMA: return gen_scfdma(spec);
        case WaveformClass::OFDM: return gen_ofdm(spec);
        case WaveformClass::LFM: return gen_lfm(spec);
        case WaveformClass::UNKNOWN: break;
    }
    throw std::invalid_argument("gen_signal: use gen_unknown for unknown kinds");
}

}  // namespace specmon

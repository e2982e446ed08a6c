#pragma once

#include <cstdint>
#include <string>

#include "specmon/iq.hpp"

namespace specmon {

// The four waveform classes the classifier knows, plus the four test-only
// unknown kinds used to exercise the watchdog.
enum class WaveformClass : uint8_t { SC = 0, SCFDMA = 1, OFDM = 2, LFM = 3, UNKNOWN = 4 };

enum class UnknownKind : uint8_t { AM = 0, FM = 1, BLE = 2, WHITE_NOISE = 3 };

enum class ModulationScheme : uint8_t {
    BPSK = 0, QPSK = 1, PSK16 = 2, PSK64 = 3,
    QAM4 = 4, QAM16 = 5, QAM64 = 6, QAM256 = 7
};

constexpr size_t kNumKnownClasses = 4;
constexpr size_t kNumModulations = 8;

const char* to_string(WaveformClass c);
const char* to_string(UnknownKind k);
const char* to_string(ModulationScheme m);

struct SignalSpec {
    WaveformClass waveform_class = WaveformClass::SC;
    ModulationScheme modulation = ModulationScheme::QPSK;  // comm classes only
    double sample_rate_hz = 1e8;
    double duration_s = 163.84e-6;  // desk scale; paper scale is 1 ms
    double bandwidth_hz = 5e7;
    uint64_t seed = 0;

    size_t num_samples() const;
};

// Unit-average-energy constellation points for a modulation scheme.
const cvec& constellation(ModulationScheme m);

// count symbols drawn uniformly from the constellation; deterministic in seed.
cvec gen_symbols(ModulationScheme m, size_t count, uint64_t seed);

IQSignal gen_sc(const SignalSpec& spec);
IQSignal gen_ofdm(const SignalSpec& spec);
IQSignal gen_scfdma(const SignalSpec& spec);
IQSignal gen_lfm(const SignalSpec& spec);

// Shared OFDM/SC-FDMA grid; SC-FDMA adds the DFT precoder.
IQSignal gen_multicarrier(const SignalSpec& spec, bool dft_precode);

IQSignal gen_unknown(UnknownKind kind, const SignalSpec& spec);

// Dispatch on spec.waveform_class (known classes only).
IQSignal gen_signal(const SignalSpec& spec);

// OFDM/SC-FDMA numerology (bandwidth = active/nfft * sample rate = 50 MHz
// at the default 100 MHz rate).
constexpr size_t kOfdmFftSize = 256;
constexpr size_t kOfdmActiveCarriers = 128;
constexpr size_t kOfdmCpLen = 32;

constexpr size_t kLfmChirpLen = 2048;

// SC pulse shaping
constexpr size_t kScSamplesPerSymbol = 3;
constexpr double kScRollOff = 0.5;
constexpr size_t kScFilterSpanSymbols = 12;

// BLE stand-in hop schedule
constexpr double kBleSymbolRate = 1e6;
constexpr double kBleHopPeriodS = 625e-6;
constexpr size_t kBleNumChannels = 40;
constexpr double kBleChannelSpacingHz = 2e6;

}  // namespace specmon

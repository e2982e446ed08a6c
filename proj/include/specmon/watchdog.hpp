#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specmon/features.hpp"
#include "specmon/neural.hpp"
#include "specmon/sigsynth.hpp"

namespace specmon {

enum class RegionDesign : uint8_t { TWO = 0, THREE = 1, FIVE = 2 };

const char* to_string(RegionDesign d);
RegionDesign region_design_from_string(const std::string& s);

struct Region {
    std::string label;
    double rmse_min = 0.0;
    double rmse_max = 0.0;

    bool contains(double rmse) const { return rmse >= rmse_min && rmse <= rmse_max; }
};

// Closed RMSE intervals; anything outside every region is unknown. The
// region count is 1 (TWO), 2 (THREE) or 4 (FIVE); the unknown "region" is the
// implicit complement.
struct RegionSet {
    RegionDesign design = RegionDesign::TWO;
    size_t nfft = 0;
    std::vector<Region> regions;

    void save(const std::string& path) const;
    static RegionSet load(const std::string& path);
};

enum class Verdict : uint8_t { KNOWN = 0, UNKNOWN = 1 };

struct DetectionResult {
    double rmse = 0.0;
    Verdict verdict = Verdict::UNKNOWN;
    std::optional<std::string> matched_region;
};

// Convolutional autoencoder over normalized PSD-dB vectors; three stride-4
// conv stages (256/128/32 filters) into a 16-wide latent, mirrored decoder
// with four transpose stages, sigmoid output. L2 0.1 on conv kernels only.
Model build_autoencoder(size_t nfft, uint64_t seed);

struct WatchdogTrainOptions {
    size_t epochs = 50;
    size_t batch_size = 128;
    double learning_rate = 0.1;
    uint64_t seed = 0;
};

struct WatchdogCorpusInfo {
    double min_snr_db = 0.0;  // minimum AWGN level declared by the manifest
};

// Trains the autoencoder to reconstruct its input. Rejects corpora whose
// manifest declares AWGN below 0 dB; thresholds do not converge on those.
std::vector<double> train_watchdog(Model& model,
                                   const std::vector<std::vector<double>>& psd_features,
                                   FeatureKind kind, const WatchdogCorpusInfo& info,
                                   const WatchdogTrainOptions& opts);

double reconstruction_rmse(Model& model, const std::vector<double>& feature);

// Per-class training RMSE lists keyed by known waveform class.
using RmseByClass = std::map<WaveformClass, std::vector<double>>;

RegionSet calibrate_regions(const RmseByClass& rmse_lists, RegionDesign design, size_t nfft);

DetectionResult detect(double rmse, const RegionSet& regions);

}  // namespace specmon

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "specmon/features.hpp"
#include "specmon/neural.hpp"
#include "specmon/sigsynth.hpp"

namespace specmon {

constexpr size_t kClassifierInputSize = 4096;

struct Prediction {
    std::array<double, 4> probabilities;
    WaveformClass label;  // argmax, ties broken by lowest class index
};

// Deep feed-forward classifier: 4096 -> 64 -> 100 -> 32 -> 16 -> 4, ReLU
// hidden activations with dropout 0.2 after each, sigmoid output.
Model build_classifier(uint64_t seed);

struct ClassifierTrainOptions {
    size_t epochs = 50;
    size_t batch_size = 128;
    uint64_t seed = 0;
};

struct LabeledFeatures {
    std::vector<std::vector<double>> features;  // FFT_MAG, length 4096
    std::vector<uint8_t> labels;                // class ids 0..3
    FeatureKind kind = FeatureKind::FFT_MAG;
    size_t nfft = kClassifierInputSize;
};

// Trains in place with BCE against one-hot targets and Adamax defaults.
// Returns the per-epoch loss history.
std::vector<double> train_classifier(Model& model, const LabeledFeatures& data,
                                     const ClassifierTrainOptions& opts);

Prediction predict(Model& model, const FeatureVector& feature);
Prediction predict(Model& model, const std::vector<double>& feature_values);

}  // namespace specmon

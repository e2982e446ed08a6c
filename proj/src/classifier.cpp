#include "specmon/classifier.hpp"

#include <stdexcept>

#include "specmon/errors.hpp"

namespace specmon {

Model build_classifier(uint64_t seed) {
    Rng rng(seed);
    Model m;
    const size_t widths[] = {64, 100, 32, 16};
    size_t in = kClassifierInputSize;
    for (size_t w : widths) {
        m.add(make_dense(in, w, 0.0, WeightInit::HE, rng));
        m.add(make_relu());
        m.add(make_dropout(0.2));
        in = w;
    }
    m.add(make_dense(in, 4, 0.0, WeightInit::GLOROT, rng));
    m.add(make_sigmoid());
    return m;
}

std::vector<double> train_classifier(Model& model, const LabeledFeatures& data,
                                     const ClassifierTrainOptions& opts) {
    if (data.kind != FeatureKind::FFT_MAG || data.nfft != kClassifierInputSize) {
        throw DataError("train_classifier: expected fft_mag features of length 4096");
    }
    if (data.features.size() != data.labels.size() || data.features.empty()) {
        throw DataError("train_classifier: empty or inconsistent dataset");
    }

    Dataset ds;
    ds.inputs = data.features;
    ds.targets.reserve(data.labels.size());
    for (uint8_t label : data.labels) {
        if (label >= 4) throw DataError("train_classifier: label out of range");
        std::vector<double> onehot(4, 0.0);
        onehot[label] = 1.0;
        ds.targets.push_back(std::move(onehot));
    }

    AdamaxOptimizer opt;  // defaults per the training setup
    Rng rng(opts.seed);
    std::vector<double> history;
    history.reserve(opts.epochs);
    for (size_t e = 0; e < opts.epochs; ++e) {
        history.push_back(train_epoch(model, ds, opts.batch_size, opt, rng));
    }
    return history;
}

Prediction predict(Model& model, const std::vector<double>& feature_values) {
    if (feature_values.size() != kClassifierInputSize) {
        throw DataError("predict: expected feature length 4096");
    }
    const Tensor out = model.forward(Tensor({feature_values.size()}, feature_values));
    Prediction p{};
    size_t best = 0;
    for (size_t i = 0; i < 4; ++i) {
        p.probabilities[i] = out.data[i];
        if (out.data[i] > out.data[best]) best = i;  // strict: ties keep lowest index
    }
    p.label = static_cast<WaveformClass>(best);
    return p;
}

Prediction predict(Model& model, const FeatureVector& feature) {
    if (feature.kind != FeatureKind::FFT_MAG) {
        throw DataError("predict: expected fft_mag features");
    }
    return predict(model, feature.values);
}

}  // namespace specmon

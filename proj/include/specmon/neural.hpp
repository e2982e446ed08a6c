#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "specmon/rng.hpp"

namespace specmon {

struct Tensor {
    std::vector<size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<size_t> s)
        : shape(std::move(s)),
          data(std::accumulate(shape.begin(), shape.end(), size_t{1},
                               std::multiplies<size_t>())) {}
    Tensor(std::vector<size_t> s, std::vector<double> d)
        : shape(std::move(s)), data(std::move(d)) {}

    size_t size() const { return data.size(); }
    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

enum class LayerKind : uint8_t {
    DENSE = 1, CONV1D = 2, CONVT1D = 3, DROPOUT = 4,
    RELU = 5, SIGMOID = 6, FLATTEN = 7, RESHAPE = 8
};

enum class WeightInit : uint8_t { HE = 0, GLOROT = 1 };

class Layer {
public:
    virtual ~Layer() = default;
    virtual LayerKind kind() const = 0;
    virtual Tensor forward(const Tensor& x, bool training, Rng* rng) = 0;
    // Consumes the forward cache; accumulates parameter gradients (data term).
    virtual Tensor backward(const Tensor& dy) = 0;
    virtual std::vector<Tensor*> params() { return {}; }
    virtual std::vector<Tensor*> grads() { return {}; }
    // Adds 2*lambda*w for every regularized weight tensor.
    virtual void add_l2_grads() {}
    virtual double l2_penalty() const { return 0.0; }
    virtual std::vector<uint32_t> hyperparams() const { return {}; }
};

// y = W x + b; weights stored row-major {out, in}.
std::unique_ptr<Layer> make_dense(size_t in, size_t out, double l2, WeightInit init, Rng& rng);
// 1D convolution over {length, channels} maps, "same"-style zero padding,
// output length = ceil(in/stride). Weights {kernel, in_ch, filters}.
std::unique_ptr<Layer> make_conv1d(size_t in_ch, size_t filters, size_t kernel, size_t stride,
                                   double l2, WeightInit init, Rng& rng);
// Exact adjoint of make_conv1d with the same kernel/stride; output length =
// input length * stride.
std::unique_ptr<Layer> make_convt1d(size_t in_ch, size_t filters, size_t kernel, size_t stride,
                                    double l2, WeightInit init, Rng& rng);
std::unique_ptr<Layer> make_dropout(double rate);
std::unique_ptr<Layer> make_relu();
std::unique_ptr<Layer> make_sigmoid();
std::unique_ptr<Layer> make_flatten();
std::unique_ptr<Layer> make_reshape(size_t length, size_t channels);

class Model {
public:
    Model() = default;
    Model(Model&&) = default;
    Model& operator=(Model&&) = default;

    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }
    size_t num_layers() const { return layers_.size(); }
    Layer& layer(size_t i) { return *layers_[i]; }

    Tensor forward(const Tensor& input, bool training = false, Rng* rng = nullptr);
    // Backpropagates loss_grad through the cached forward pass; accumulates
    // parameter gradients including the L2 term. Returns the input gradient.
    Tensor backward(const Tensor& loss_grad);

    void zero_grads();
    std::vector<Tensor*> params();
    std::vector<Tensor*> grads();
    size_t num_parameters();
    double l2_penalty() const;

    void save(const std::string& path) const;
    static Model load(const std::string& path);

private:
    std::vector<std::unique_ptr<Layer>> layers_;
    bool has_cache_ = false;
};

struct LossResult {
    double value = 0.0;
    Tensor grad;
};

// Mean binary cross-entropy with predictions clamped to [1e-7, 1 - 1e-7].
LossResult bce_loss(const Tensor& prediction, const Tensor& target);

class Optimizer {
public:
    virtual ~Optimizer() = default;
    virtual void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) = 0;
};

// Adamax: m <- b1 m + (1-b1) g; u <- max(b2 u, |g|);
// theta <- theta - (alpha / (1 - b1^t)) * m / max(u, 1e-8).
class AdamaxOptimizer : public Optimizer {
public:
    explicit AdamaxOptimizer(double alpha = 0.002, double beta1 = 0.9, double beta2 = 0.999)
        : alpha_(alpha), beta1_(beta1), beta2_(beta2) {}
    void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) override;
    uint64_t step_count() const { return t_; }

private:
    double alpha_, beta1_, beta2_;
    uint64_t t_ = 0;
    std::vector<std::vector<double>> m_, u_;
};

// Comparison hooks only; same update-rule contract style as Adamax.
class AdamOptimizer : public Optimizer {
public:
    explicit AdamOptimizer(double alpha = 0.001, double beta1 = 0.9, double beta2 = 0.999)
        : alpha_(alpha), beta1_(beta1), beta2_(beta2) {}
    void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) override;

private:
    double alpha_, beta1_, beta2_;
    uint64_t t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

class SgdOptimizer : public Optimizer {
public:
    explicit SgdOptimizer(double lr = 0.01) : lr_(lr) {}
    void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) override;

private:
    double lr_;
};

struct Dataset {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;

    size_t size() const { return inputs.size(); }
};

// One pass over the dataset in seeded-shuffle order, mini-batches of
// batch_size, gradients averaged in ascending batch index. Returns the mean
// per-sample loss (data term plus L2 penalty).
double train_epoch(Model& model, const Dataset& data, size_t batch_size,
                   Optimizer& opt, Rng& rng);

}  // namespace specmon

#include "specmon/neural.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "specmon/errors.hpp"

namespace specmon {

namespace {

// ---------------------------------------------------------------------------
// small dense kernels (row-major)
// ---------------------------------------------------------------------------

// C[MxN] += A[MxK] * B[KxN]
void gemm_nn(size_t M, size_t K, size_t N, const double* A, const double* B, double* C) {
    for (size_t i = 0; i < M; ++i) {
        const double* a = A + i * K;
        double* c = C + i * N;
        for (size_t k = 0; k < K; ++k) {
            const double av = a[k];
            if (av == 0.0) continue;
            const double* b = B + k * N;
            for (size_t j = 0; j < N; ++j) c[j] += av * b[j];
        }
    }
}

// C[KxN] += A[MxK]^T * B[MxN]
void gemm_tn(size_t M, size_t K, size_t N, const double* A, const double* B, double* C) {
    for (size_t i = 0; i < M; ++i) {
        const double* a = A + i * K;
        const double* b = B + i * N;
        for (size_t k = 0; k < K; ++k) {
            const double av = a[k];
            if (av == 0.0) continue;
            double* c = C + k * N;
            for (size_t j = 0; j < N; ++j) c[j] += av * b[j];
        }
    }
}

// C[MxK] += A[MxN] * B[KxN]^T
void gemm_nt(size_t M, size_t N, size_t K, const double* A, const double* B, double* C) {
    for (size_t i = 0; i < M; ++i) {
        const double* a = A + i * N;
        double* c = C + i * K;
        for (size_t k = 0; k < K; ++k) {
            const double* b = B + k * N;
            double acc = 0.0;
            for (size_t j = 0; j < N; ++j) acc += a[j] * b[j];
            c[k] += acc;
        }
    }
}

double init_limit(WeightInit init, size_t fan_in, size_t fan_out) {
    const double denom = init == WeightInit::HE ? static_cast<double>(fan_in)
                                                : static_cast<double>(fan_in + fan_out);
    return std::sqrt(6.0 / denom);
}

void init_uniform(Tensor& w, double limit, Rng& rng) {
    for (double& v : w.data) v = rng.uniform(-limit, limit);
}

uint32_t f32_bits(double v) { return std::bit_cast<uint32_t>(static_cast<float>(v)); }
double f32_from_bits(uint32_t b) { return static_cast<double>(std::bit_cast<float>(b)); }

// Geometry of a "same"-padded strided conv: out = ceil(in/stride).
struct ConvGeom {
    size_t in_len, out_len, kernel, stride, pad_left;
};

ConvGeom conv_geom(size_t in_len, size_t kernel, size_t stride) {
    ConvGeom g;
    g.in_len = in_len;
    g.kernel = kernel;
    g.stride = stride;
    g.out_len = (in_len + stride - 1) / stride;
    const size_t span = (g.out_len - 1) * stride + kernel;
    g.pad_left = (span > in_len ? span - in_len : 0) / 2;
    return g;
}

// A[out_len x kernel*ch]: A[t, i*ch + c] = x[t*s + i - pl, c] (0 off the edge)
void im2col(const ConvGeom& g, size_t ch, const double* x, double* A) {
    std::memset(A, 0, g.out_len * g.kernel * ch * sizeof(double));
    for (size_t t = 0; t < g.out_len; ++t) {
        double* row = A + t * g.kernel * ch;
        for (size_t i = 0; i < g.kernel; ++i) {
            const long src = static_cast<long>(t * g.stride + i) - static_cast<long>(g.pad_left);
            if (src < 0 || src >= static_cast<long>(g.in_len)) continue;
            std::memcpy(row + i * ch, x + static_cast<size_t>(src) * ch, ch * sizeof(double));
        }
    }
}

// adjoint of im2col: x[t*s + i - pl, c] += A[t, i*ch + c]
void col2im(const ConvGeom& g, size_t ch, const double* A, double* x) {
    for (size_t t = 0; t < g.out_len; ++t) {
        const double* row = A + t * g.kernel * ch;
        for (size_t i = 0; i < g.kernel; ++i) {
            const long dst = static_cast<long>(t * g.stride + i) - static_cast<long>(g.pad_left);
            if (dst < 0 || dst >= static_cast<long>(g.in_len)) continue;
            double* xr = x + static_cast<size_t>(dst) * ch;
            const double* ar = row + i * ch;
            for (size_t c = 0; c < ch; ++c) xr[c] += ar[c];
        }
    }
}

// ---------------------------------------------------------------------------
// layers
// ---------------------------------------------------------------------------

class DenseLayer : public Layer {
public:
    DenseLayer(size_t in, size_t out, double l2, WeightInit init, Rng& rng)
        : in_(in), out_(out), l2_(l2), w_({out, in}), b_({out}), gw_({out, in}), gb_({out}) {
        init_uniform(w_, init_limit(init, in, out), rng);
        b_.zero();
    }

    LayerKind kind() const override { return LayerKind::DENSE; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        if (x.size() != in_) {
            throw ModelError("dense layer: expected input size " + std::to_string(in_) +
                             ", got " + std::to_string(x.size()));
        }
        cache_ = x.data;
        Tensor y({out_});
        for (size_t o = 0; o < out_; ++o) {
            const double* w = w_.data.data() + o * in_;
            double acc = b_.data[o];
            for (size_t i = 0; i < in_; ++i) acc += w[i] * x.data[i];
            y.data[o] = acc;
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx({in_});
        dx.zero();
        for (size_t o = 0; o < out_; ++o) {
            const double d = dy.data[o];
            gb_.data[o] += d;
            double* gw = gw_.data.data() + o * in_;
            const double* w = w_.data.data() + o * in_;
            for (size_t i = 0; i < in_; ++i) {
                gw[i] += d * cache_[i];
                dx.data[i] += d * w[i];
            }
        }
        return dx;
    }

    std::vector<Tensor*> params() override { return {&w_, &b_}; }
    std::vector<Tensor*> grads() override { return {&gw_, &gb_}; }

    void add_l2_grads() override {
        if (l2_ == 0.0) return;
        for (size_t i = 0; i < w_.size(); ++i) gw_.data[i] += 2.0 * l2_ * w_.data[i];
    }

    double l2_penalty() const override {
        if (l2_ == 0.0) return 0.0;
        double s = 0.0;
        for (double v : w_.data) s += v * v;
        return l2_ * s;
    }

    std::vector<uint32_t> hyperparams() const override {
        return {static_cast<uint32_t>(in_), static_cast<uint32_t>(out_), f32_bits(l2_)};
    }

private:
    size_t in_, out_;
    double l2_;
    Tensor w_, b_, gw_, gb_;
    std::vector<double> cache_;
};

class Conv1dLayer : public Layer {
public:
    Conv1dLayer(size_t in_ch, size_t filters, size_t kernel, size_t stride, double l2,
                WeightInit init, Rng& rng)
        : in_ch_(in_ch), filters_(filters), kernel_(kernel), stride_(stride), l2_(l2),
          w_({kernel, in_ch, filters}), b_({filters}),
          gw_({kernel, in_ch, filters}), gb_({filters}) {
        init_uniform(w_, init_limit(init, kernel * in_ch, kernel * filters), rng);
        b_.zero();
    }

    LayerKind kind() const override { return LayerKind::CONV1D; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        if (x.shape.size() != 2 || x.shape[1] != in_ch_) {
            throw ModelError("conv1d layer: expected {length, " + std::to_string(in_ch_) +
                             "} input");
        }
        geom_ = conv_geom(x.shape[0], kernel_, stride_);
        const size_t kc = kernel_ * in_ch_;
        col_.assign(geom_.out_len * kc, 0.0);
        im2col(geom_, in_ch_, x.data.data(), col_.data());

        Tensor y({geom_.out_len, filters_});
        for (size_t t = 0; t < geom_.out_len; ++t) {
            std::copy(b_.data.begin(), b_.data.end(), y.data.begin() + static_cast<long>(t * filters_));
        }
        gemm_nn(geom_.out_len, kc, filters_, col_.data(), w_.data.data(), y.data.data());
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const size_t kc = kernel_ * in_ch_;
        // dW += col^T dy, db += sum_t dy
        gemm_tn(geom_.out_len, kc, filters_, col_.data(), dy.data.data(), gw_.data.data());
        for (size_t t = 0; t < geom_.out_len; ++t) {
            for (size_t f = 0; f < filters_; ++f) gb_.data[f] += dy.data[t * filters_ + f];
        }
        // dX = col2im(dy W^T)
        std::vector<double> dcol(geom_.out_len * kc, 0.0);
        gemm_nt(geom_.out_len, filters_, kc, dy.data.data(), w_.data.data(), dcol.data());
        Tensor dx({geom_.in_len, in_ch_});
        dx.zero();
        col2im(geom_, in_ch_, dcol.data(), dx.data.data());
        return dx;
    }

    std::vector<Tensor*> params() override { return {&w_, &b_}; }
    std::vector<Tensor*> grads() override { return {&gw_, &gb_}; }

    void add_l2_grads() override {
        if (l2_ == 0.0) return;
        for (size_t i = 0; i < w_.size(); ++i) gw_.data[i] += 2.0 * l2_ * w_.data[i];
    }

    double l2_penalty() const override {
        if (l2_ == 0.0) return 0.0;
        double s = 0.0;
        for (double v : w_.data) s += v * v;
        return l2_ * s;
    }

    std::vector<uint32_t> hyperparams() const override {
        return {static_cast<uint32_t>(in_ch_), static_cast<uint32_t>(filters_),
                static_cast<uint32_t>(kernel_), static_cast<uint32_t>(stride_), f32_bits(l2_)};
    }

private:
    size_t in_ch_, filters_, kernel_, stride_;
    double l2_;
    Tensor w_, b_, gw_, gb_;
    ConvGeom geom_{};
    std::vector<double> col_;
};

// Transposed conv, built as the exact adjoint of Conv1dLayer: the forward
// pass is conv's backward-data computation and vice versa. Weight tensor has
// the same {kernel, out_ch, in_ch} layout as the mirrored conv.
class ConvT1dLayer : public Layer {
public:
    ConvT1dLayer(size_t in_ch, size_t filters, size_t kernel, size_t stride, double l2,
                 WeightInit init, Rng& rng)
        : in_ch_(in_ch), filters_(filters), kernel_(kernel), stride_(stride), l2_(l2),
          w_({kernel, filters, in_ch}), b_({filters}),
          gw_({kernel, filters, in_ch}), gb_({filters}) {
        init_uniform(w_, init_limit(init, kernel * in_ch, kernel * filters), rng);
        b_.zero();
    }

    LayerKind kind() const override { return LayerKind::CONVT1D; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        if (x.shape.size() != 2 || x.shape[1] != in_ch_) {
            throw ModelError("convt1d layer: expected {length, " + std::to_string(in_ch_) +
                             "} input");
        }
        const size_t in_len = x.shape[0];
        const size_t out_len = in_len * stride_;
        geom_ = conv_geom(out_len, kernel_, stride_);  // mirrored conv: out_len -> in_len
        cache_x_ = x.data;

        const size_t kf = kernel_ * filters_;
        std::vector<double> g(in_len * kf, 0.0);
        gemm_nt(in_len, in_ch_, kf, x.data.data(), w_.data.data(), g.data());

        Tensor y({out_len, filters_});
        for (size_t u = 0; u < out_len; ++u) {
            std::copy(b_.data.begin(), b_.data.end(), y.data.begin() + static_cast<long>(u * filters_));
        }
        col2im(geom_, filters_, g.data(), y.data.data());
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const size_t in_len = geom_.out_len;
        const size_t kf = kernel_ * filters_;
        std::vector<double> col(in_len * kf, 0.0);
        im2col(geom_, filters_, dy.data.data(), col.data());

        // dW += col^T x ; db += sum dy ; dx = col W
        gemm_tn(in_len, kf, in_ch_, col.data(), cache_x_.data(), gw_.data.data());
        for (size_t u = 0; u < geom_.in_len; ++u) {
            for (size_t f = 0; f < filters_; ++f) gb_.data[f] += dy.data[u * filters_ + f];
        }
        Tensor dx({in_len, in_ch_});
        dx.zero();
        gemm_nn(in_len, kf, in_ch_, col.data(), w_.data.data(), dx.data.data());
        return dx;
    }

    std::vector<Tensor*> params() override { return {&w_, &b_}; }
    std::vector<Tensor*> grads() override { return {&gw_, &gb_}; }

    void add_l2_grads() override {
        if (l2_ == 0.0) return;
        for (size_t i = 0; i < w_.size(); ++i) gw_.data[i] += 2.0 * l2_ * w_.data[i];
    }

    double l2_penalty() const override {
        if (l2_ == 0.0) return 0.0;
        double s = 0.0;
        for (double v : w_.data) s += v * v;
        return l2_ * s;
    }

    std::vector<uint32_t> hyperparams() const override {
        return {static_cast<uint32_t>(in_ch_), static_cast<uint32_t>(filters_),
                static_cast<uint32_t>(kernel_), static_cast<uint32_t>(stride_), f32_bits(l2_)};
    }

private:
    size_t in_ch_, filters_, kernel_, stride_;
    double l2_;
    Tensor w_, b_, gw_, gb_;
    ConvGeom geom_{};  // geometry of the mirrored conv (in = our output)
    std::vector<double> cache_x_;
};

class DropoutLayer : public Layer {
public:
    explicit DropoutLayer(double rate) : rate_(rate) {
        if (rate < 0.0 || rate >= 1.0) throw ModelError("dropout rate must be in [0, 1)");
    }

    LayerKind kind() const override { return LayerKind::DROPOUT; }

    Tensor forward(const Tensor& x, bool training, Rng* rng) override {
        if (!training) {
            mask_.clear();
            return x;
        }
        if (rng == nullptr) throw ModelError("dropout: training forward needs an rng");
        const double keep_scale = 1.0 / (1.0 - rate_);
        mask_.resize(x.size());
        Tensor y = x;
        for (size_t i = 0; i < x.size(); ++i) {
            mask_[i] = rng->uniform() < rate_ ? 0.0 : keep_scale;
            y.data[i] *= mask_[i];
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        if (mask_.empty()) return dy;  // inference pass-through
        Tensor dx = dy;
        for (size_t i = 0; i < dx.size(); ++i) dx.data[i] *= mask_[i];
        return dx;
    }

    std::vector<uint32_t> hyperparams() const override { return {f32_bits(rate_)}; }

private:
    double rate_;
    std::vector<double> mask_;
};

class ReluLayer : public Layer {
public:
    LayerKind kind() const override { return LayerKind::RELU; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        cache_ = x.data;
        Tensor y = x;
        for (double& v : y.data) v = v > 0.0 ? v : 0.0;
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = dy;
        for (size_t i = 0; i < dx.size(); ++i) {
            if (cache_[i] <= 0.0) dx.data[i] = 0.0;
        }
        return dx;
    }

private:
    std::vector<double> cache_;
};

class SigmoidLayer : public Layer {
public:
    LayerKind kind() const override { return LayerKind::SIGMOID; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        Tensor y = x;
        for (double& v : y.data) {
            v = 1.0 / (1.0 + std::exp(-v));
            v = std::min(1.0 - 1e-12, std::max(1e-12, v));
        }
        cache_ = y.data;
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = dy;
        for (size_t i = 0; i < dx.size(); ++i) {
            dx.data[i] *= cache_[i] * (1.0 - cache_[i]);
        }
        return dx;
    }

private:
    std::vector<double> cache_;
};

class FlattenLayer : public Layer {
public:
    LayerKind kind() const override { return LayerKind::FLATTEN; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        shape_ = x.shape;
        return Tensor({x.size()}, x.data);
    }

    Tensor backward(const Tensor& dy) override { return Tensor(shape_, dy.data); }

private:
    std::vector<size_t> shape_;
};

class ReshapeLayer : public Layer {
public:
    ReshapeLayer(size_t length, size_t channels) : len_(length), ch_(channels) {}

    LayerKind kind() const override { return LayerKind::RESHAPE; }

    Tensor forward(const Tensor& x, bool, Rng*) override {
        if (x.size() != len_ * ch_) {
            throw ModelError("reshape layer: size mismatch, expected " +
                             std::to_string(len_ * ch_));
        }
        return Tensor({len_, ch_}, x.data);
    }

    Tensor backward(const Tensor& dy) override { return Tensor({len_ * ch_}, dy.data); }

    std::vector<uint32_t> hyperparams() const override {
        return {static_cast<uint32_t>(len_), static_cast<uint32_t>(ch_)};
    }

private:
    size_t len_, ch_;
};

std::unique_ptr<Layer> make_layer_from(LayerKind kind, const std::vector<uint32_t>& h) {
    Rng dummy(0);  // parameters are overwritten by the loader
    switch (kind) {
        case LayerKind::DENSE:
            return make_dense(h.at(0), h.at(1), f32_from_bits(h.at(2)), WeightInit::HE, dummy);
        case LayerKind::CONV1D:
            return make_conv1d(h.at(0), h.at(1), h.at(2), h.at(3), f32_from_bits(h.at(4)),
                               WeightInit::HE, dummy);
        case LayerKind::CONVT1D:
            return make_convt1d(h.at(0), h.at(1), h.at(2), h.at(3), f32_from_bits(h.at(4)),
                                WeightInit::HE, dummy);
        case LayerKind::DROPOUT: return make_dropout(f32_from_bits(h.at(0)));
        case LayerKind::RELU: return make_relu();
        case LayerKind::SIGMOID: return make_sigmoid();
        case LayerKind::FLATTEN: return make_flatten();
        case LayerKind::RESHAPE: return make_reshape(h.at(0), h.at(1));
    }
    throw ModelError("unknown layer kind in model file");
}

template <typename T>
void write_le(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw ModelError("model file truncated");
    return v;
}

}  // namespace

std::unique_ptr<Layer> make_dense(size_t in, size_t out, double l2, WeightInit init, Rng& rng) {
    return std::make_unique<DenseLayer>(in, out, l2, init, rng);
}
std::unique_ptr<Layer> make_conv1d(size_t in_ch, size_t filters, size_t kernel, size_t stride,
                                   double l2, WeightInit init, Rng& rng) {
    return std::make_unique<Conv1dLayer>(in_ch, filters, kernel, stride, l2, init, rng);
}
std::unique_ptr<Layer> make_convt1d(size_t in_ch, size_t filters, size_t kernel, size_t stride,
                                    double l2, WeightInit init, Rng& rng) {
    return std::make_unique<ConvT1dLayer>(in_ch, filters, kernel, stride, l2, init, rng);
}
std::unique_ptr<Layer> make_dropout(double rate) { return std::make_unique<DropoutLayer>(rate); }
std::unique_ptr<Layer> make_relu() { return std::make_unique<ReluLayer>(); }
std::unique_ptr<Layer> make_sigmoid() { return std::make_unique<SigmoidLayer>(); }
std::unique_ptr<Layer> make_flatten() { return std::make_unique<FlattenLayer>(); }
std::unique_ptr<Layer> make_reshape(size_t length, size_t channels) {
    return std::make_unique<ReshapeLayer>(length, channels);
}

Tensor Model::forward(const Tensor& input, bool training, Rng* rng) {
    Tensor x = input;
    for (size_t i = 0; i < layers_.size(); ++i) {
        try {
            x = layers_[i]->forward(x, training, rng);
        } catch (const ModelError& e) {
            throw ModelError("layer " + std::to_string(i) + ": " + e.what());
        }
    }
    has_cache_ = true;
    return x;
}

Tensor Model::backward(const Tensor& loss_grad) {
    if (!has_cache_) throw ModelError("backward called without a cached forward pass");
    Tensor g = loss_grad;
    for (size_t i = layers_.size(); i-- > 0;) {
        g = layers_[i]->backward(g);
        layers_[i]->add_l2_grads();
    }
    has_cache_ = false;
    return g;
}

void Model::zero_grads() {
    for (auto& l : layers_) {
        for (Tensor* g : l->grads()) g->zero();
    }
}

std::vector<Tensor*> Model::params() {
    std::vector<Tensor*> out;
    for (auto& l : layers_) {
        for (Tensor* p : l->params()) out.push_back(p);
    }
    return out;
}

std::vector<Tensor*> Model::grads() {
    std::vector<Tensor*> out;
    for (auto& l : layers_) {
        for (Tensor* g : l->grads()) out.push_back(g);
    }
    return out;
}

size_t Model::num_parameters() {
    size_t n = 0;
    for (Tensor* p : params()) n += p->size();
    return n;
}

double Model::l2_penalty() const {
    double s = 0.0;
    for (const auto& l : layers_) s += l->l2_penalty();
    return s;
}

void Model::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ModelError("cannot open model file for writing: " + path);
    os.write("SWNN", 4);
    write_le<uint16_t>(os, 1);  // format version
    write_le<uint16_t>(os, static_cast<uint16_t>(layers_.size()));
    for (const auto& l : layers_) {
        write_le<uint8_t>(os, static_cast<uint8_t>(l->kind()));
        const std::vector<uint32_t> h = l->hyperparams();
        write_le<uint16_t>(os, static_cast<uint16_t>(h.size()));
        for (uint32_t v : h) write_le<uint32_t>(os, v);
        auto params = const_cast<Layer&>(*l).params();
        write_le<uint8_t>(os, static_cast<uint8_t>(params.size()));
        for (const Tensor* p : params) {
            write_le<uint8_t>(os, static_cast<uint8_t>(p->shape.size()));
            for (size_t d : p->shape) write_le<uint32_t>(os, static_cast<uint32_t>(d));
            for (double v : p->data) write_le<float>(os, static_cast<float>(v));
        }
    }
    if (!os) throw ModelError("write failed: " + path);
}

Model Model::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ModelError("cannot open model file: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SWNN", 4) != 0) {
        throw ModelError("not a model file: " + path);
    }
    const uint16_t version = read_le<uint16_t>(is);
    if (version != 1) {
        throw ModelError("unsupported model format version " + std::to_string(version));
    }
    const uint16_t nlayers = read_le<uint16_t>(is);

    Model m;
    for (uint16_t li = 0; li < nlayers; ++li) {
        const auto kind = static_cast<LayerKind>(read_le<uint8_t>(is));
        const uint16_t nh = read_le<uint16_t>(is);
        std::vector<uint32_t> h(nh);
        for (uint32_t& v : h) v = read_le<uint32_t>(is);
        std::unique_ptr<Layer> layer = make_layer_from(kind, h);

        const uint8_t nparams = read_le<uint8_t>(is);
        auto params = layer->params();
        if (nparams != params.size()) throw ModelError("model file: parameter count mismatch");
        for (Tensor* p : params) {
            const uint8_t ndims = read_le<uint8_t>(is);
            std::vector<size_t> dims(ndims);
            size_t total = 1;
            for (size_t d = 0; d < ndims; ++d) {
                dims[d] = read_le<uint32_t>(is);
                total *= dims[d];
            }
            if (dims != p->shape) throw ModelError("model file: tensor shape mismatch");
            for (size_t i = 0; i < total; ++i) p->data[i] = static_cast<double>(read_le<float>(is));
        }
        m.add(std::move(layer));
    }
    return m;
}

LossResult bce_loss(const Tensor& prediction, const Tensor& target) {
    if (prediction.shape != target.shape) {
        throw ModelError("bce_loss: prediction/target shape mismatch");
    }
    const size_t n = prediction.size();
    LossResult r;
    r.grad = Tensor(prediction.shape);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double p = std::min(1.0 - 1e-7, std::max(1e-7, prediction.data[i]));
        const double t = target.data[i];
        total += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
        r.grad.data[i] = (-t / p + (1.0 - t) / (1.0 - p)) / static_cast<double>(n);
    }
    r.value = total / static_cast<double>(n);
    return r;
}

void AdamaxOptimizer::step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
    if (m_.empty()) {
        for (const Tensor* p : params) {
            m_.emplace_back(p->size(), 0.0);
            u_.emplace_back(p->size(), 0.0);
        }
    }
    ++t_;
    const double bias = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    for (size_t pi = 0; pi < params.size(); ++pi) {
        Tensor& p = *params[pi];
        const Tensor& g = *grads[pi];
        std::vector<double>& m = m_[pi];
        std::vector<double>& u = u_[pi];
        for (size_t i = 0; i < p.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g.data[i];
            u[i] = std::max(beta2_ * u[i], std::abs(g.data[i]));
            p.data[i] -= (alpha_ / bias) * m[i] / std::max(u[i], 1e-8);
        }
    }
}

void AdamOptimizer::step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
    if (m_.empty()) {
        for (const Tensor* p : params) {
            m_.emplace_back(p->size(), 0.0);
            v_.emplace_back(p->size(), 0.0);
        }
    }
    ++t_;
    const double b1c = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double b2c = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t pi = 0; pi < params.size(); ++pi) {
        Tensor& p = *params[pi];
        const Tensor& g = *grads[pi];
        for (size_t i = 0; i < p.size(); ++i) {
            m_[pi][i] = beta1_ * m_[pi][i] + (1.0 - beta1_) * g.data[i];
            v_[pi][i] = beta2_ * v_[pi][i] + (1.0 - beta2_) * g.data[i] * g.data[i];
            p.data[i] -= alpha_ * (m_[pi][i] / b1c) / (std::sqrt(v_[pi][i] / b2c) + 1e-8);
        }
    }
}

void SgdOptimizer::step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
    for (size_t pi = 0; pi < params.size(); ++pi) {
        for (size_t i = 0; i < params[pi]->size(); ++i) {
            params[pi]->data[i] -= lr_ * grads[pi]->data[i];
        }
    }
}

double train_epoch(Model& model, const Dataset& data, size_t batch_size,
                   Optimizer& opt, Rng& rng) {
    if (data.size() == 0) throw std::invalid_argument("train_epoch: empty dataset");
    if (batch_size < 1) throw std::invalid_argument("train_epoch: batch_size < 1");

    std::vector<size_t> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    const std::vector<Tensor*> params = model.params();
    const std::vector<Tensor*> grads = model.grads();

    double total = 0.0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
        const size_t end = std::min(start + batch_size, order.size());
        model.zero_grads();
        for (size_t bi = start; bi < end; ++bi) {
            const size_t idx = order[bi];
            Tensor x({data.inputs[idx].size()}, data.inputs[idx]);
            Tensor t({data.targets[idx].size()}, data.targets[idx]);
            const Tensor y = model.forward(x, true, &rng);
            LossResult loss = bce_loss(y, t);
            total += loss.value;
            model.backward(loss.grad);
        }
        const double inv = 1.0 / static_cast<double>(end - start);
        for (Tensor* g : grads) {
            for (double& v : g->data) v *= inv;
        }
        opt.step(params, grads);
    }
    return total / static_cast<double>(data.size()) + model.l2_penalty();
}

}  // namespace specmon

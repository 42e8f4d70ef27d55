#include "dispvo/network.hpp"

#include <cmath>
#include <random>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

// Uniform in [-limit, limit) from the top 53 bits of a 64-bit draw.
double uniform_symmetric(std::mt19937_64& rng, double limit) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * unit - 1.0) * limit;
}

}  // namespace

void ArchConfig::validate() const {
    if (height <= 0 || width <= 0) throw ConfigError("input resolution must be positive");
    auto positive = [](const std::vector<int>& v) {
        for (int c : v) if (c <= 0) return false;
        return true;
    };
    if (feature_channels.empty() || !positive(feature_channels)) {
        throw ConfigError("frame-feature block needs at least one layer with positive channel counts");
    }
    if (attention_channels.size() + 1 != feature_channels.size() || !positive(attention_channels)) {
        throw ConfigError("attention block must mirror the frame-feature block depth");
    }
    if (head_conv_channels.empty()) throw ConfigError("each head needs at least one convolution layer");
    if (!positive(head_conv_channels) || !positive(translation_hidden) || !positive(rotation_hidden)) {
        throw ConfigError("head channel and width counts must be positive");
    }
    if (rotation_depth() != translation_depth() + 2) {
        throw ConfigError("rotation head must have exactly two more layers than the translation head");
    }
}

int ArchConfig::translation_depth() const {
    return static_cast<int>(head_conv_channels.size() + translation_hidden.size()) + 1;
}

int ArchConfig::rotation_depth() const {
    return static_cast<int>(head_conv_channels.size() + rotation_hidden.size()) + 1;
}

Tensor to_tensor(const DisparityMap& map) {
    Tensor t = Tensor::zeros(1, map.height, map.width);
    for (std::size_t i = 0; i < map.values.size(); ++i) t.data[i] = map.values[i];
    return t;
}

Network::Network(ArchConfig arch, std::uint64_t seed) : arch_(std::move(arch)) {
    arch_.validate();
    build();
    initialize(seed);
}

Network::Network(ArchConfig arch, std::vector<double> params) : arch_(std::move(arch)) {
    arch_.validate();
    build();
    if (params.size() != params_.size()) throw InputError("parameter count does not match the architecture");
    params_ = std::move(params);
}

int Network::translation_depth() const { return static_cast<int>(trans_convs_.size() + trans_dense_.size()); }
int Network::rotation_depth() const { return static_cast<int>(rot_convs_.size() + rot_dense_.size()); }

void Network::build() {
    std::size_t cursor = 0;
    auto add_conv = [&](std::vector<ConvSpec>& stack, const std::string& name, LayerKind kind, int in_c, int out_c,
                        int in_h, int in_w, Activation act) {
        ConvSpec s;
        s.in_channels = in_c;
        s.out_channels = out_c;
        s.in_height = in_h;
        s.in_width = in_w;
        s.act = act;
        s.weight_offset = cursor;
        cursor += s.weight_count();
        s.bias_offset = cursor;
        cursor += s.bias_count();
        blocks_.push_back({name + ".weight", kind, s.weight_offset, s.weight_count()});
        blocks_.push_back({name + ".bias", kind, s.bias_offset, s.bias_count()});
        stack.push_back(s);
    };
    auto add_dense = [&](std::vector<DenseSpec>& stack, const std::string& name, int in_f, int out_f,
                         Activation act) {
        DenseSpec s;
        s.in_features = in_f;
        s.out_features = out_f;
        s.act = act;
        s.weight_offset = cursor;
        cursor += s.weight_count();
        s.bias_offset = cursor;
        cursor += s.bias_count();
        blocks_.push_back({name + ".weight", LayerKind::Dense, s.weight_offset, s.weight_count()});
        blocks_.push_back({name + ".bias", LayerKind::Dense, s.bias_offset, s.bias_count()});
        stack.push_back(s);
    };

    int h = arch_.height, w = arch_.width, c = 1;
    for (std::size_t i = 0; i < arch_.feature_channels.size(); ++i) {
        add_conv(feature_, "feature." + std::to_string(i), LayerKind::FeatureConv, c, arch_.feature_channels[i], h, w,
                 Activation::Relu);
        c = arch_.feature_channels[i];
        h = feature_.back().out_height();
        w = feature_.back().out_width();
    }

    int ah = arch_.height, aw = arch_.width, ac = 1;
    const std::size_t attention_layers = arch_.attention_channels.size() + 1;
    for (std::size_t i = 0; i < attention_layers; ++i) {
        const bool last = i + 1 == attention_layers;
        const int out_c = last ? 1 : arch_.attention_channels[i];
        add_conv(attention_, "attention." + std::to_string(i), LayerKind::AttentionConv, ac, out_c, ah, aw,
                 last ? Activation::Sigmoid : Activation::Relu);
        ac = out_c;
        ah = attention_.back().out_height();
        aw = attention_.back().out_width();
    }

    auto build_head = [&](const std::string& name, std::vector<ConvSpec>& convs, std::vector<DenseSpec>& dense,
                          const std::vector<int>& hidden) {
        int hc = 2 * c, hh = h, hw = w;
        for (std::size_t i = 0; i < arch_.head_conv_channels.size(); ++i) {
            add_conv(convs, name + ".conv" + std::to_string(i), LayerKind::HeadConv, hc, arch_.head_conv_channels[i],
                     hh, hw, Activation::Relu);
            hc = arch_.head_conv_channels[i];
            hh = convs.back().out_height();
            hw = convs.back().out_width();
        }
        int features = hc * hh * hw;
        for (std::size_t i = 0; i < hidden.size(); ++i) {
            add_dense(dense, name + ".dense" + std::to_string(i), features, hidden[i], Activation::Relu);
            features = hidden[i];
        }
        add_dense(dense, name + ".dense" + std::to_string(hidden.size()), features, 3, Activation::Identity);
    };
    build_head("translation", trans_convs_, trans_dense_, arch_.translation_hidden);
    build_head("rotation", rot_convs_, rot_dense_, arch_.rotation_hidden);

    if (rotation_depth() != translation_depth() + 2) {
        throw ConfigError("rotation head must have exactly two more layers than the translation head");
    }
    params_.assign(cursor, 0.0);
}

void Network::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto fill = [&](std::size_t offset, std::size_t count, double limit) {
        for (std::size_t i = 0; i < count; ++i) params_[offset + i] = uniform_symmetric(rng, limit);
    };
    // He-uniform for ReLU layers, LeCun-uniform for the logistic gate.
    auto init_conv = [&](const ConvSpec& s) {
        const double gain = s.act == Activation::Relu ? 6.0 : 3.0;
        fill(s.weight_offset, s.weight_count(), std::sqrt(gain / static_cast<double>(s.fan_in())));
    };
    auto init_dense = [&](const DenseSpec& s) {
        if (s.act == Activation::Identity && arch_.zero_output_layers) return;
        const double gain = s.act == Activation::Relu ? 6.0 : 3.0;
        fill(s.weight_offset, s.weight_count(), std::sqrt(gain / static_cast<double>(s.in_features)));
    };
    for (const auto& s : feature_) init_conv(s);
    for (const auto& s : attention_) init_conv(s);
    params_[attention_.back().bias_offset] = arch_.attention_bias_init;
    for (const auto& s : trans_convs_) init_conv(s);
    for (const auto& s : trans_dense_) init_dense(s);
    for (const auto& s : rot_convs_) init_conv(s);
    for (const auto& s : rot_dense_) init_dense(s);
}

void Network::check_input(const Tensor& t) const {
    if (t.channels != 1 || t.height != arch_.height || t.width != arch_.width) {
        throw InputError("input resolution " + std::to_string(t.height) + "x" + std::to_string(t.width) +
                         " does not match network resolution " + std::to_string(arch_.height) + "x" +
                         std::to_string(arch_.width));
    }
}

FrameTrace Network::run_frame(const Tensor& frame) const {
    FrameTrace ft;
    ft.feature.resize(feature_.size());
    ft.attention.resize(attention_.size());
    const Tensor* x = &frame;
    for (std::size_t i = 0; i < feature_.size(); ++i) {
        conv_forward(feature_[i], params_, *x, ft.feature[i]);
        x = &ft.feature[i].output;
    }
    x = &frame;
    for (std::size_t i = 0; i < attention_.size(); ++i) {
        conv_forward(attention_[i], params_, *x, ft.attention[i]);
        x = &ft.attention[i].output;
    }
    const Tensor& f = ft.feature.back().output;
    const Tensor& a = ft.attention.back().output;
    ft.gated = f;
    const std::size_t plane = f.plane();
    for (int c = 0; c < f.channels; ++c) {
        for (std::size_t p = 0; p < plane; ++p) ft.gated.data[c * plane + p] *= a.data[p];
    }
    return ft;
}

Vec3 Network::run_head(const std::vector<ConvSpec>& convs, const std::vector<DenseSpec>& dense, const Tensor& input,
                       HeadTrace& trace) const {
    trace.convs.resize(convs.size());
    trace.dense.resize(dense.size());
    const Tensor* x = &input;
    for (std::size_t i = 0; i < convs.size(); ++i) {
        conv_forward(convs[i], params_, *x, trace.convs[i]);
        x = &trace.convs[i].output;
    }
    std::span<const double> v = x->data;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        dense_forward(dense[i], params_, v, trace.dense[i]);
        v = trace.dense[i].output;
    }
    return {v[0], v[1], v[2]};
}

PairTrace Network::forward_traced(const Tensor& earlier, const Tensor& later) const {
    check_input(earlier);
    check_input(later);
    PairTrace tr;
    tr.frames[0] = run_frame(earlier);
    tr.frames[1] = run_frame(later);
    const Tensor& g0 = tr.frames[0].gated;
    const Tensor& g1 = tr.frames[1].gated;
    tr.concatenated = Tensor::zeros(g0.channels + g1.channels, g0.height, g0.width);
    std::copy(g0.data.begin(), g0.data.end(), tr.concatenated.data.begin());
    std::copy(g1.data.begin(), g1.data.end(), tr.concatenated.data.begin() + static_cast<std::ptrdiff_t>(g0.size()));
    tr.prediction.translation = run_head(trans_convs_, trans_dense_, tr.concatenated, tr.translation);
    tr.prediction.euler = run_head(rot_convs_, rot_dense_, tr.concatenated, tr.rotation);
    return tr;
}

Prediction Network::forward(const Tensor& earlier, const Tensor& later) const {
    return forward_traced(earlier, later).prediction;
}

Prediction Network::forward(const DisparityMap& earlier, const DisparityMap& later) const {
    return forward(to_tensor(earlier), to_tensor(later));
}

Prediction Network::heads(const Tensor& concatenated) const {
    HeadTrace t, r;
    Prediction p;
    p.translation = run_head(trans_convs_, trans_dense_, concatenated, t);
    p.euler = run_head(rot_convs_, rot_dense_, concatenated, r);
    return p;
}

Tensor Network::attention_map(const Tensor& frame) const {
    check_input(frame);
    std::vector<ConvCache> caches(attention_.size());
    const Tensor* x = &frame;
    for (std::size_t i = 0; i < attention_.size(); ++i) {
        conv_forward(attention_[i], params_, *x, caches[i]);
        x = &caches[i].output;
    }
    return caches.back().output;
}

Tensor Network::back_head(const std::vector<ConvSpec>& convs, const std::vector<DenseSpec>& dense,
                          const HeadTrace& trace, const Vec3& grad, std::span<double> grads) const {
    std::vector<double> g{grad.x(), grad.y(), grad.z()};
    for (std::size_t i = dense.size(); i-- > 0;) {
        g = dense_backward(dense[i], params_, trace.dense[i], g, grads, true);
    }
    const Tensor& last = trace.convs.back().output;
    Tensor gt{last.channels, last.height, last.width, std::move(g)};
    for (std::size_t i = convs.size(); i-- > 0;) {
        gt = conv_backward(convs[i], params_, trace.convs[i], gt, grads, true);
    }
    return gt;
}

void Network::backward(const PairTrace& tr, const PredictionGrad& grad, std::span<double> grads) const {
    if (grads.size() != params_.size()) throw InputError("gradient buffer does not match parameter count");
    Tensor d_concat = back_head(trans_convs_, trans_dense_, tr.translation, grad.translation, grads);
    const Tensor d_rot = back_head(rot_convs_, rot_dense_, tr.rotation, grad.euler, grads);
    for (std::size_t i = 0; i < d_concat.size(); ++i) d_concat.data[i] += d_rot.data[i];

    for (std::size_t k = 0; k < 2; ++k) {
        const FrameTrace& ft = tr.frames[k];
        const Tensor& f = ft.feature.back().output;
        const Tensor& a = ft.attention.back().output;
        const std::size_t plane = f.plane();
        const std::size_t base = k * f.size();

        Tensor d_feature = Tensor::zeros(f.channels, f.height, f.width);
        Tensor d_attention = Tensor::zeros(1, a.height, a.width);
        for (int c = 0; c < f.channels; ++c) {
            for (std::size_t p = 0; p < plane; ++p) {
                const double dg = d_concat.data[base + c * plane + p];
                d_feature.data[c * plane + p] = dg * a.data[p];
                d_attention.data[p] += dg * f.data[c * plane + p];
            }
        }
        for (std::size_t i = feature_.size(); i-- > 0;) {
            d_feature = conv_backward(feature_[i], params_, ft.feature[i], d_feature, grads, i > 0);
        }
        for (std::size_t i = attention_.size(); i-- > 0;) {
            d_attention = conv_backward(attention_[i], params_, ft.attention[i], d_attention, grads, i > 0);
        }
    }
}

}  // namespace dispvo

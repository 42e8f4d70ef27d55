#include "dispvo/layers.hpp"

#include <cmath>

#include <Eigen/Core>

namespace dispvo {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMat>;
using RowMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

void im2col(const ConvSpec& s, const Tensor& in, std::vector<double>& cols) {
    const int oh = s.out_height(), ow = s.out_width();
    const std::size_t p = static_cast<std::size_t>(oh) * ow;
    cols.assign(s.fan_in() * p, 0.0);
    std::size_t row = 0;
    for (int c = 0; c < s.in_channels; ++c) {
        for (int ky = 0; ky < s.kernel; ++ky) {
            for (int kx = 0; kx < s.kernel; ++kx, ++row) {
                double* dst = cols.data() + row * p;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * s.stride - s.pad + ky;
                    if (iy < 0 || iy >= in.height) continue;
                    const double* src = in.data.data() + (static_cast<std::size_t>(c) * in.height + iy) * in.width;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * s.stride - s.pad + kx;
                        if (ix >= 0 && ix < in.width) dst[oy * ow + ox] = src[ix];
                    }
                }
            }
        }
    }
}

void col2im(const ConvSpec& s, const std::vector<double>& cols, Tensor& out) {
    const int oh = s.out_height(), ow = s.out_width();
    const std::size_t p = static_cast<std::size_t>(oh) * ow;
    out = Tensor::zeros(s.in_channels, s.in_height, s.in_width);
    std::size_t row = 0;
    for (int c = 0; c < s.in_channels; ++c) {
        for (int ky = 0; ky < s.kernel; ++ky) {
            for (int kx = 0; kx < s.kernel; ++kx, ++row) {
                const double* src = cols.data() + row * p;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * s.stride - s.pad + ky;
                    if (iy < 0 || iy >= out.height) continue;
                    double* dst = out.data.data() + (static_cast<std::size_t>(c) * out.height + iy) * out.width;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * s.stride - s.pad + kx;
                        if (ix >= 0 && ix < out.width) dst[ix] += src[oy * ow + ox];
                    }
                }
            }
        }
    }
}

}  // namespace

double activate(Activation act, double z) {
    switch (act) {
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Identity: return z;
    }
    return z;
}

double activation_slope(Activation act, double out) {
    switch (act) {
        case Activation::Relu: return out > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: return out * (1.0 - out);
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

void conv_forward(const ConvSpec& s, std::span<const double> params, const Tensor& input, ConvCache& cache) {
    im2col(s, input, cache.columns);
    const int oh = s.out_height(), ow = s.out_width();
    const Eigen::Index p = static_cast<Eigen::Index>(oh) * ow;
    const Eigen::Index k = static_cast<Eigen::Index>(s.fan_in());
    cache.output = Tensor::zeros(s.out_channels, oh, ow);

    ConstRowMap w(params.data() + s.weight_offset, s.out_channels, k);
    ConstVecMap b(params.data() + s.bias_offset, s.out_channels);
    ConstRowMap cols(cache.columns.data(), k, p);
    RowMap out(cache.output.data.data(), s.out_channels, p);
    out.noalias() = w * cols;
    out.colwise() += b;
    for (double& v : cache.output.data) v = activate(s.act, v);
}

Tensor conv_backward(const ConvSpec& s, std::span<const double> params, const ConvCache& cache,
                     const Tensor& grad_output, std::span<double> grads, bool want_input_grad) {
    const Eigen::Index p = static_cast<Eigen::Index>(cache.output.plane());
    const Eigen::Index k = static_cast<Eigen::Index>(s.fan_in());

    RowMat dz(s.out_channels, p);
    for (Eigen::Index c = 0; c < s.out_channels; ++c) {
        for (Eigen::Index i = 0; i < p; ++i) {
            const std::size_t idx = static_cast<std::size_t>(c * p + i);
            dz(c, i) = grad_output.data[idx] * activation_slope(s.act, cache.output.data[idx]);
        }
    }

    ConstRowMap cols(cache.columns.data(), k, p);
    RowMap dw(grads.data() + s.weight_offset, s.out_channels, k);
    VecMap db(grads.data() + s.bias_offset, s.out_channels);
    dw.noalias() += dz * cols.transpose();
    db += dz.rowwise().sum();

    Tensor grad_input;
    if (want_input_grad) {
        ConstRowMap w(params.data() + s.weight_offset, s.out_channels, k);
        std::vector<double> dcols(static_cast<std::size_t>(k * p));
        RowMap dc(dcols.data(), k, p);
        dc.noalias() = w.transpose() * dz;
        col2im(s, dcols, grad_input);
    }
    return grad_input;
}

void dense_forward(const DenseSpec& s, std::span<const double> params, std::span<const double> input,
                   DenseCache& cache) {
    cache.input.assign(input.begin(), input.end());
    cache.output.assign(static_cast<std::size_t>(s.out_features), 0.0);
    ConstRowMap w(params.data() + s.weight_offset, s.out_features, s.in_features);
    ConstVecMap b(params.data() + s.bias_offset, s.out_features);
    ConstVecMap x(cache.input.data(), s.in_features);
    VecMap y(cache.output.data(), s.out_features);
    y.noalias() = w * x;
    y += b;
    for (double& v : cache.output) v = activate(s.act, v);
}

std::vector<double> dense_backward(const DenseSpec& s, std::span<const double> params, const DenseCache& cache,
                                   std::span<const double> grad_output, std::span<double> grads,
                                   bool want_input_grad) {
    Eigen::VectorXd dz(s.out_features);
    for (int i = 0; i < s.out_features; ++i) {
        dz(i) = grad_output[static_cast<std::size_t>(i)] *
                activation_slope(s.act, cache.output[static_cast<std::size_t>(i)]);
    }
    ConstVecMap x(cache.input.data(), s.in_features);
    RowMap dw(grads.data() + s.weight_offset, s.out_features, s.in_features);
    VecMap db(grads.data() + s.bias_offset, s.out_features);
    dw.noalias() += dz * x.transpose();
    db += dz;

    std::vector<double> grad_input;
    if (want_input_grad) {
        grad_input.assign(static_cast<std::size_t>(s.in_features), 0.0);
        ConstRowMap w(params.data() + s.weight_offset, s.out_features, s.in_features);
        VecMap dx(grad_input.data(), s.in_features);
        dx.noalias() = w.transpose() * dz;
    }
    return grad_input;
}

}  // namespace dispvo

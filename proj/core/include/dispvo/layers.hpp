#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dispvo {

/// Dense (channels, height, width) activation volume, row-major.
struct Tensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    static Tensor zeros(int c, int h, int w) {
        return {c, h, w, std::vector<double>(static_cast<std::size_t>(c) * h * w, 0.0)};
    }

    std::size_t size() const { return data.size(); }
    std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
    double& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
    double at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
};

enum class Activation { Relu, Sigmoid, Identity };

double activate(Activation act, double z);
/// Derivative expressed through the activation output.
double activation_slope(Activation act, double out);

/// 2-D convolution with a square kernel. Weights are stored
/// [out][in][ky][kx] starting at weight_offset in the flat parameter vector.
struct ConvSpec {
    int in_channels = 0;
    int out_channels = 0;
    int in_height = 0;
    int in_width = 0;
    int kernel = 3;
    int stride = 2;
    int pad = 1;
    Activation act = Activation::Relu;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;

    int out_height() const { return (in_height + 2 * pad - kernel) / stride + 1; }
    int out_width() const { return (in_width + 2 * pad - kernel) / stride + 1; }
    std::size_t weight_count() const {
        return static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
    }
    std::size_t bias_count() const { return static_cast<std::size_t>(out_channels); }
    std::size_t fan_in() const { return static_cast<std::size_t>(in_channels) * kernel * kernel; }
};

/// Fully connected layer, weights [out][in].
struct DenseSpec {
    int in_features = 0;
    int out_features = 0;
    Activation act = Activation::Relu;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;

    std::size_t weight_count() const { return static_cast<std::size_t>(out_features) * in_features; }
    std::size_t bias_count() const { return static_cast<std::size_t>(out_features); }
};

struct ConvCache {
    std::vector<double> columns;  // im2col of the input, (in*k*k) x (out_h*out_w)
    Tensor output;                // post-activation
};

struct DenseCache {
    std::vector<double> input;
    std::vector<double> output;  // post-activation
};

void conv_forward(const ConvSpec& spec, std::span<const double> params, const Tensor& input, ConvCache& cache);

/// Accumulates parameter gradients into `grads`. Returns dL/dinput when
/// `want_input_grad`, otherwise an empty tensor.
Tensor conv_backward(const ConvSpec& spec, std::span<const double> params, const ConvCache& cache,
                     const Tensor& grad_output, std::span<double> grads, bool want_input_grad);

void dense_forward(const DenseSpec& spec, std::span<const double> params, std::span<const double> input,
                   DenseCache& cache);

std::vector<double> dense_backward(const DenseSpec& spec, std::span<const double> params, const DenseCache& cache,
                                   std::span<const double> grad_output, std::span<double> grads,
                                   bool want_input_grad);

}  // namespace dispvo

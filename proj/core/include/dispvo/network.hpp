#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dispvo/disparity.hpp"
#include "dispvo/layers.hpp"
#include "dispvo/pose.hpp"

namespace dispvo {

/// Layer inventory of the two-stream regression network.
///
/// The frame-feature and attention blocks are applied to each frame with
/// shared weights. attention_channels lists the hidden attention layers; a
/// final 1-channel logistic layer is always appended so the block mirrors the
/// feature block's depth and spatial size. The rotation head must be exactly
/// two layers deeper than the translation head.
struct ArchConfig {
    int height = 64;
    int width = 192;
    std::vector<int> feature_channels{8, 16, 32, 32};
    std::vector<int> attention_channels{8, 8, 8};
    std::vector<int> head_conv_channels{32, 32};
    std::vector<int> translation_hidden{64};
    std::vector<int> rotation_hidden{64, 64, 64};
    double attention_bias_init = 1.0;
    bool zero_output_layers = true;

    /// Throws ConfigError on an inconsistent inventory.
    void validate() const;

    int translation_depth() const;
    int rotation_depth() const;

    bool operator==(const ArchConfig&) const = default;
};

/// Network output for one ordered pair of frames.
struct Prediction {
    Vec3 euler = Vec3::Zero();        // roll, pitch, yaw (radians)
    Vec3 translation = Vec3::Zero();  // meters
};

/// dL/dPrediction.
struct PredictionGrad {
    Vec3 euler = Vec3::Zero();
    Vec3 translation = Vec3::Zero();
};

enum class LayerKind { FeatureConv, AttentionConv, HeadConv, Dense };

/// Named slice of the flat parameter vector.
struct ParamBlock {
    std::string name;
    LayerKind kind;
    std::size_t offset;
    std::size_t size;
};

struct FrameTrace {
    std::vector<ConvCache> feature;
    std::vector<ConvCache> attention;
    Tensor gated;
};

struct HeadTrace {
    std::vector<ConvCache> convs;
    std::vector<DenseCache> dense;
};

/// Every intermediate needed to back-propagate one pair.
struct PairTrace {
    std::array<FrameTrace, 2> frames;
    Tensor concatenated;
    HeadTrace translation;
    HeadTrace rotation;
    Prediction prediction;
};

Tensor to_tensor(const DisparityMap& map);

class Network {
public:
    /// Builds the layer graph and initializes weights deterministically from `seed`.
    explicit Network(ArchConfig arch, std::uint64_t seed = 0);

    /// Builds the layer graph around existing parameters (e.g. from a checkpoint).
    Network(ArchConfig arch, std::vector<double> params);

    const ArchConfig& arch() const { return arch_; }

    std::span<double> parameters() { return params_; }
    std::span<const double> parameters() const { return params_; }
    std::size_t parameter_count() const { return params_.size(); }
    const std::vector<ParamBlock>& blocks() const { return blocks_; }
    /// Offset of the final attention layer's bias (one scalar).
    std::size_t attention_gate_bias_offset() const { return attention_.back().bias_offset; }

    int translation_depth() const;
    int rotation_depth() const;

    Prediction forward(const Tensor& earlier, const Tensor& later) const;
    Prediction forward(const DisparityMap& earlier, const DisparityMap& later) const;
    PairTrace forward_traced(const Tensor& earlier, const Tensor& later) const;

    /// Accumulates dL/dparams for one traced pair into `grads`.
    void backward(const PairTrace& trace, const PredictionGrad& grad, std::span<double> grads) const;

    /// Attention map (1 x h x w, values in (0, 1)) for a single frame.
    Tensor attention_map(const Tensor& frame) const;

    /// Runs both heads on an already gated and concatenated feature volume.
    Prediction heads(const Tensor& concatenated) const;

private:
    void build();
    void initialize(std::uint64_t seed);
    void check_input(const Tensor& t) const;
    FrameTrace run_frame(const Tensor& frame) const;
    Vec3 run_head(const std::vector<ConvSpec>& convs, const std::vector<DenseSpec>& dense, const Tensor& input,
                  HeadTrace& trace) const;
    Tensor back_head(const std::vector<ConvSpec>& convs, const std::vector<DenseSpec>& dense, const HeadTrace& trace,
                     const Vec3& grad, std::span<double> grads) const;

    ArchConfig arch_;
    std::vector<double> params_;
    std::vector<ParamBlock> blocks_;
    std::vector<ConvSpec> feature_;
    std::vector<ConvSpec> attention_;
    std::vector<ConvSpec> trans_convs_;
    std::vector<DenseSpec> trans_dense_;
    std::vector<ConvSpec> rot_convs_;
    std::vector<DenseSpec> rot_dense_;
};

}  // namespace dispvo

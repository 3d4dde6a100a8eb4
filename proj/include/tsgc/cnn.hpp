#ifndef TSGC_CNN_HPP
#define TSGC_CNN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsgc {

// <input, channels, factor, kernel1, kernel2> architecture vector; stride and
// dilation are 1, pooling is non-overlapping with the remainder dropped.
struct ModelSpec {
    int input_len = 0;
    int in_channels = 1;
    int factor = 1;
    int kernel1 = 1;
    int kernel2 = 1;
    int pool1 = 7;
    int pool2 = 3;
};

struct LayerDims {
    int c1 = 0; // in_channels * factor
    int c2 = 0; // in_channels * factor^2
    int l1 = 0; // input_len - kernel1 + 1
    int p1 = 0; // floor(l1 / pool1)
    int l2 = 0; // p1 - kernel2 + 1
    int p2 = 0; // floor(l2 / pool2)
    int flat = 0; // c2 * p2
};

// Throws std::invalid_argument naming the first layer whose length drops
// below 1.
LayerDims derive_dims(const ModelSpec& spec);

struct TrainedModel {
    ModelSpec spec;
    std::vector<double> w1; // (c1, in_channels, kernel1)
    std::vector<double> b1; // (c1)
    std::vector<double> w2; // (c2, c1, kernel2)
    std::vector<double> b2; // (c2)
    std::vector<double> wf; // (flat)
    double bf = 0.0;
};

// Parameters drawn uniformly from +-sqrt(1/fan_in), deterministically from
// the seed.
TrainedModel build(const ModelSpec& spec, std::uint64_t seed);

struct Batch {
    int count = 0;
    int channels = 0;
    int len = 0;
    std::vector<double> x; // (count, channels, len) row-major
    std::vector<double> y; // (count) binary labels
};

struct ForwardCache {
    std::vector<double> x;
    int count = 0;
    std::vector<double> z1, a1; // (count, c1, l1)
    std::vector<int> amax1;     // (count, c1, p1) argmax position within l1
    std::vector<double> pool1;  // (count, c1, p1)
    std::vector<double> z2, a2; // (count, c2, l2)
    std::vector<int> amax2;     // (count, c2, p2)
    std::vector<double> pool2;  // (count, c2, p2), the flattened fc input
    std::vector<double> logits; // (count)
    std::vector<double> probs;  // (count)
};

// conv1 -> ReLU -> maxpool -> conv2 -> ReLU -> maxpool -> fc -> sigmoid.
// Returns the per-sample probabilities; fills `cache` when non-null.
std::vector<double> forward(const TrainedModel& model, const Batch& batch,
                            ForwardCache* cache = nullptr);

// Mean binary cross-entropy with probabilities clamped to [1e-7, 1 - 1e-7].
double bce_loss(std::span<const double> probs, std::span<const double> labels);

struct Gradients {
    std::vector<double> w1, b1, w2, b2, wf;
    double bf = 0.0;
};

// Exact gradients of the mean BCE; maxpool routes to the argmax (lowest
// index on ties).
Gradients backward(const TrainedModel& model, const ForwardCache& cache,
                   std::span<const double> labels);

struct AdamParams {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int batch_size = 16;
};

struct Dataset {
    int channels = 0;
    int len = 0;
    std::vector<std::vector<double>> xs; // each (channels * len)
    std::vector<int> labels;

    int size() const { return static_cast<int>(xs.size()); }
};

struct TrainResult {
    TrainedModel model;
    std::vector<double> epoch_loss; // mean training loss per epoch
};

// `epochs` shuffled passes with Adam updates; deterministic from (model,
// data, seed). Throws a divergence error naming epoch/batch on NaN loss.
TrainResult train(TrainedModel model, const Dataset& data, int epochs,
                  const AdamParams& params, std::uint64_t seed);

// Fraction of examples with (probability >= 0.5) == label. Throws on an
// empty dataset.
double evaluate(const TrainedModel& model, const Dataset& data);

// Versioned little-endian binary: "TSGC", version, spec fields as u32,
// parameter tensors in declaration order as float64.
void save_checkpoint(const TrainedModel& model, const std::string& path);
TrainedModel load_checkpoint(const std::string& path);

// Central finite differences (h = 1e-4) against backward() on a small
// two-block net; returns the max relative error over all parameters.
// `corrupt` perturbs one analytic gradient, for the negative control.
double gradcheck_max_rel_error(std::uint64_t seed, bool corrupt = false);

} // namespace tsgc

#endif

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace svlm {

struct Sample {
    std::vector<double> vision_in;
    std::vector<double> text_in;
    std::size_t label = 0;
};

using SampleSet = std::vector<Sample>;

// Synthetic two-modality classification task. Each modality has n_classes
// Gaussian prototype vectors; a sample picks latent indices (c_v, c_t)
// uniformly, emits the prototypes plus Gaussian noise, and is labeled
// (c_v + c_t) mod n_classes. Neither modality alone determines the label.
struct TaskSpec {
    std::size_t n_classes = 8;
    std::size_t d_v = 16;
    std::size_t d_t = 8;
    double sigma = 0.3;
    // Prototype entries are N(0, scale^2). The per-modality scales set each
    // sub-task's signal-to-noise ratio and therefore how much precision the
    // corresponding model half must carry.
    double vision_scale = 1.0;
    double text_scale = 1.0;

    void validate() const; // n_classes >= 2, sigma >= 0, scales > 0
};

// Deterministic per (spec, seed). Draw order from the data substream:
// vision prototypes row-major, text prototypes row-major, then per sample
// c_v, c_t, vision noise, text noise.
SampleSet generate(const TaskSpec& spec, std::size_t count, std::uint64_t seed);

struct Splits {
    SampleSet train;
    SampleSet calib;
    SampleSet eval;
};

// Order-preserving disjoint slices: train first, then calib_count samples,
// then eval_count samples; the union is the input multiset.
Splits split(const SampleSet& data, std::size_t calib_count, std::size_t eval_count);

} // namespace svlm

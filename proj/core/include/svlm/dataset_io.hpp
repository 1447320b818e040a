#pragma once

#include <filesystem>

#include "svlm/datagen.hpp"

namespace svlm {

// SVLD1 dataset container (see docs/formats.md):
//   "SVLD1"  magic, 5 bytes
//   u32      sample count n
//   u32      d_v, u32 d_t, u32 n_classes       (little-endian)
//   f64[n*d_v]  vision inputs, sample-major
//   f64[n*d_t]  text inputs, sample-major
//   u16[n]      labels
// Round-trips are bit-exact.

struct DatasetFile {
    std::size_t d_v = 0;
    std::size_t d_t = 0;
    std::size_t n_classes = 0;
    SampleSet samples;
};

void save_dataset(const DatasetFile& ds, const std::filesystem::path& path);
DatasetFile load_dataset(const std::filesystem::path& path);

} // namespace svlm

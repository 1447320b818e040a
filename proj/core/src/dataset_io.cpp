#include "svlm/dataset_io.hpp"

#include <fstream>

#include "svlm/binio.hpp"
#include "svlm/errors.hpp"

namespace svlm {

namespace {
constexpr char kMagic[] = "SVLD1";
}

void save_dataset(const DatasetFile& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("save_dataset: cannot open " + path.string());

    out.write(kMagic, 5);
    binio::write_u32(out, static_cast<std::uint32_t>(ds.samples.size()));
    binio::write_u32(out, static_cast<std::uint32_t>(ds.d_v));
    binio::write_u32(out, static_cast<std::uint32_t>(ds.d_t));
    binio::write_u32(out, static_cast<std::uint32_t>(ds.n_classes));

    for (const Sample& s : ds.samples) {
        if (s.vision_in.size() != ds.d_v || s.text_in.size() != ds.d_t)
            throw DataError("save_dataset: sample dims disagree with header");
        binio::write_f64_array(out, s.vision_in);
    }
    for (const Sample& s : ds.samples) binio::write_f64_array(out, s.text_in);
    for (const Sample& s : ds.samples) {
        if (s.label >= ds.n_classes) throw DataError("save_dataset: label out of range");
        binio::write_u16(out, static_cast<std::uint16_t>(s.label));
    }
    if (!out) throw DataError("save_dataset: write failed for " + path.string());
}

DatasetFile load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_dataset: cannot open " + path.string());

    binio::expect_magic(in, kMagic);
    const std::uint32_t n = binio::read_u32(in);
    DatasetFile ds;
    ds.d_v = binio::read_u32(in);
    ds.d_t = binio::read_u32(in);
    ds.n_classes = binio::read_u32(in);
    if (ds.n_classes < 2) throw DataError("load_dataset: invalid class count");

    ds.samples.resize(n);
    for (Sample& s : ds.samples) s.vision_in = binio::read_f64_array(in, ds.d_v);
    for (Sample& s : ds.samples) s.text_in = binio::read_f64_array(in, ds.d_t);
    for (Sample& s : ds.samples) {
        s.label = binio::read_u16(in);
        if (s.label >= ds.n_classes) throw DataError("load_dataset: label out of range");
    }
    return ds;
}

} // namespace svlm

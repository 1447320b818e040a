#include "svlm/checkpoint.hpp"

#include <fstream>

#include "svlm/binio.hpp"
#include "svlm/errors.hpp"

namespace svlm {

namespace {
constexpr char kMagic[] = "SVLM1";
constexpr std::uint32_t kVersion = 1;
} // namespace

const char* to_string(CheckpointStage s) {
    switch (s) {
        case CheckpointStage::Raw: return "raw";
        case CheckpointStage::Pruned: return "pruned";
        case CheckpointStage::Merged: return "merged";
    }
    return "?";
}

SparsityProvenance SparsityProvenance::from_spec(const SparsitySpec& spec) {
    SparsityProvenance p;
    if (spec.pattern == SparsitySpec::Pattern::Unstructured) {
        p.pattern = Pattern::Unstructured;
        p.ratio = spec.ratio;
    } else {
        p.pattern = Pattern::NofM;
        p.n = static_cast<std::uint32_t>(spec.n);
        p.m = static_cast<std::uint32_t>(spec.m);
    }
    return p;
}

void save_checkpoint(const ToyVlm& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("save_checkpoint: cannot open " + path.string());

    out.write(kMagic, 5);
    binio::write_u32(out, kVersion);
    binio::write_u8(out, static_cast<std::uint8_t>(meta.stage));
    binio::write_u8(out, static_cast<std::uint8_t>(meta.sparsity.pattern));
    binio::write_f64(out, meta.sparsity.ratio);
    binio::write_u32(out, meta.sparsity.n);
    binio::write_u32(out, meta.sparsity.m);
    binio::write_u64(out, meta.seed);

    const VlmDims& d = model.dims();
    for (std::size_t dim : {d.d_v, d.h_v, d.d_q, d.d_t, d.h_l, d.n_classes})
        binio::write_u32(out, static_cast<std::uint32_t>(dim));

    binio::write_u32(out, static_cast<std::uint32_t>(model.layers().size()));
    for (const PrunableLayer& layer : model.layers()) {
        binio::write_string(out, layer.name);
        binio::write_u8(out, static_cast<std::uint8_t>(layer.modality));
        binio::write_u32(out, static_cast<std::uint32_t>(layer.w0.rows()));
        binio::write_u32(out, static_cast<std::uint32_t>(layer.w0.cols()));
        binio::write_f64_array(out, layer.w0.data());
        binio::write_f64_array(out, layer.bias);
        binio::write_bytes(out, layer.mask.bytes());
        binio::write_u8(out, layer.adapter ? 1 : 0);
        if (layer.adapter) {
            binio::write_u8(out, static_cast<std::uint8_t>(layer.adapter->mode));
            binio::write_u32(out, static_cast<std::uint32_t>(layer.adapter->rank));
            binio::write_f64_array(out, layer.adapter->b_mat.data());
            binio::write_f64_array(out, layer.adapter->a_mat.data());
        }
    }
    if (!out) throw DataError("save_checkpoint: write failed for " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_checkpoint: cannot open " + path.string());

    binio::expect_magic(in, kMagic);
    CheckpointMeta meta;
    meta.version = binio::read_u32(in);
    if (meta.version != kVersion) throw DataError("load_checkpoint: unsupported version");
    const std::uint8_t stage = binio::read_u8(in);
    if (stage > 2) throw DataError("load_checkpoint: bad stage byte");
    meta.stage = static_cast<CheckpointStage>(stage);
    const std::uint8_t pattern = binio::read_u8(in);
    if (pattern > 2) throw DataError("load_checkpoint: bad sparsity pattern byte");
    meta.sparsity.pattern = static_cast<SparsityProvenance::Pattern>(pattern);
    meta.sparsity.ratio = binio::read_f64(in);
    meta.sparsity.n = binio::read_u32(in);
    meta.sparsity.m = binio::read_u32(in);
    meta.seed = binio::read_u64(in);

    VlmDims dims;
    dims.d_v = binio::read_u32(in);
    dims.h_v = binio::read_u32(in);
    dims.d_q = binio::read_u32(in);
    dims.d_t = binio::read_u32(in);
    dims.h_l = binio::read_u32(in);
    dims.n_classes = binio::read_u32(in);

    ToyVlm model = ToyVlm::zeros(dims);
    const std::uint32_t layer_count = binio::read_u32(in);
    if (layer_count != model.layers().size())
        throw DataError("load_checkpoint: unexpected layer count");

    for (PrunableLayer& layer : model.mutable_layers()) {
        const std::string name = binio::read_string(in);
        if (name != layer.name) throw DataError("load_checkpoint: unexpected layer '" + name + "'");
        const std::uint8_t modality = binio::read_u8(in);
        if (modality != static_cast<std::uint8_t>(layer.modality))
            throw DataError("load_checkpoint: modality mismatch for layer " + name);
        const std::uint32_t rows = binio::read_u32(in);
        const std::uint32_t cols = binio::read_u32(in);
        if (rows != layer.w0.rows() || cols != layer.w0.cols())
            throw DataError("load_checkpoint: shape mismatch for layer " + name);
        layer.w0 = Matrix(rows, cols, binio::read_f64_array(in, std::size_t{rows} * cols));
        layer.bias = binio::read_f64_array(in, rows);
        BitMask mask = BitMask::zeros(rows, cols);
        mask.bytes() = binio::read_bytes(in, mask.bytes().size());
        if (mask.size() % 8 != 0 && (mask.bytes().back() >> (mask.size() % 8)) != 0)
            throw DataError("load_checkpoint: mask padding bits set for layer " + name);
        layer.mask = std::move(mask);
        if (binio::read_u8(in) != 0) {
            Adapter adapter;
            adapter.layer_name = name;
            const std::uint8_t mode = binio::read_u8(in);
            if (mode > 1) throw DataError("load_checkpoint: bad adapter mode byte");
            adapter.mode = static_cast<Adapter::Mode>(mode);
            adapter.rank = binio::read_u32(in);
            adapter.b_mat = Matrix(rows, adapter.rank, binio::read_f64_array(in, rows * adapter.rank));
            adapter.a_mat = Matrix(adapter.rank, cols, binio::read_f64_array(in, adapter.rank * cols));
            layer.adapter = std::move(adapter);
        }
    }
    return {std::move(model), meta};
}

} // namespace svlm

#include "svlm/report.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <map>

#include "svlm/errors.hpp"

namespace svlm {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("write_csv: cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw DataError("write_csv: write failed for " + path.string());
}

std::vector<SparsityRow> sparsity_rows(const ToyVlm& model) {
    std::vector<SparsityRow> rows;
    std::map<Modality, SparsityRow> per_modality;
    SparsityRow overall{"*", Modality::Vision, 0, 0, 0.0};

    for (const PrunableLayer& layer : model.layers()) {
        const Matrix eff = effective_weight(layer);
        SparsityRow row{layer.name, layer.modality, 0, eff.size(), 0.0};
        for (double v : eff.data()) row.zeros += v == 0.0 ? 1 : 0;
        row.sparsity = static_cast<double>(row.zeros) / static_cast<double>(row.total);
        rows.push_back(row);

        SparsityRow& agg = per_modality
                               .try_emplace(layer.modality,
                                            SparsityRow{std::string(to_string(layer.modality)) + ":*",
                                                        layer.modality, 0, 0, 0.0})
                               .first->second;
        agg.zeros += row.zeros;
        agg.total += row.total;
        overall.zeros += row.zeros;
        overall.total += row.total;
    }
    for (auto& [modality, agg] : per_modality) {
        agg.sparsity = static_cast<double>(agg.zeros) / static_cast<double>(agg.total);
        rows.push_back(agg);
    }
    overall.sparsity = static_cast<double>(overall.zeros) / static_cast<double>(overall.total);
    rows.push_back(overall);
    return rows;
}

void write_sparsity_csv(const std::filesystem::path& path, const std::vector<SparsityRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const SparsityRow& r : rows)
        cells.push_back({r.layer, to_string(r.modality), std::to_string(r.zeros),
                         std::to_string(r.total), format_double(r.sparsity)});
    write_csv(path, {"layer", "modality", "zeros", "total", "sparsity"}, cells);
}

void write_training_csv(const std::filesystem::path& path, const TrainingReport& report) {
    std::vector<std::vector<std::string>> cells;
    for (const StepRecord& s : report.steps)
        cells.push_back({std::to_string(s.step), format_double(s.lr), format_double(s.loss.task),
                         format_double(s.loss.distill), format_double(s.loss.total)});
    write_csv(path, {"step", "lr", "task_loss", "distill_loss", "total_loss"}, cells);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    std::vector<std::vector<std::string>> cells;
    for (const SweepRow& r : result.rows)
        cells.push_back({format_double(r.s_v), format_double(r.s_l), r.metric,
                         format_double(r.accuracy_mean), format_double(r.accuracy_std),
                         std::to_string(r.seed_count)});
    write_csv(path, {"s_v", "s_l", "metric", "accuracy_mean", "accuracy_std", "seeds"}, cells);
}

std::string checksum_f64(const std::vector<double>& values) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            hash ^= (bits >> (8 * i)) & 0xFF;
            hash *= 0x100000001b3ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace svlm

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svlm/datagen.hpp"
#include "svlm/model.hpp"
#include "svlm/pretrain.hpp"
#include "svlm/pruning.hpp"
#include "svlm/sparse_lora.hpp"

namespace svlm {

// Flat UTF-8 key=value document. '#' lines are comments; later assignments
// win. Keys are validated against the RunConfig registry when resolved.
class KeyValueConfig {
  public:
    static KeyValueConfig parse_file(const std::filesystem::path& path);
    static KeyValueConfig parse_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void merge_from(const KeyValueConfig& overrides);

    bool has(const std::string& key) const { return values_.contains(key); }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;

  private:
    std::map<std::string, std::string> values_;
};

struct DataConfig {
    std::size_t count = 2628;
    double sigma = 0.3;
    std::size_t calib_count = 128;
    std::size_t eval_count = 500;
    double vision_scale = 1.0;
    double text_scale = 1.0;
};

struct PruneConfig {
    ScoringMetric metric = ScoringMetric::Wanda;
    SparsitySpec spec = SparsitySpec::unstructured(0.5);
    bool group_explicit = false; // else spec.group follows default_group(metric)
    std::set<Modality> scope = {Modality::Vision, Modality::Language};

    ComparisonGroup effective_group() const {
        return group_explicit ? spec.group : default_group(metric);
    }
};

struct PlanConfig {
    double budget = 1.0;
    double step = 0.1;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

// Every run parameter as one validated document; unknown keys are rejected.
// Key reference lives in docs/formats.md.
struct RunConfig {
    std::uint64_t seed = 7;
    VlmDims dims;
    DataConfig data;
    PruneConfig prune;
    TrainConfig train;
    std::set<Modality> train_scope = {Modality::Vision, Modality::Language};
    PretrainConfig pretrain;
    PlanConfig plan;

    TaskSpec task_spec() const;

    // Precedence: built-in defaults < SVLM_SEED env (seed only) < file < cli.
    static RunConfig resolve(const std::optional<KeyValueConfig>& file_config,
                             const KeyValueConfig& cli_overrides);
    static RunConfig from_kv(const KeyValueConfig& kv);
};

std::set<Modality> parse_modality_set(const std::string& csv);
std::vector<std::uint64_t> parse_seed_list(const std::string& csv);

} // namespace svlm

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "svlm/datagen.hpp"
#include "svlm/model.hpp"
#include "svlm/pruning.hpp"

namespace svlm {

// One point of the modality sparsity budget: prune vision layers at s_v and
// language layers at s_l.
struct AllocationPlan {
    enum class Mode { Joint, VisionOnly, LanguageOnly, Custom };

    double s_v = 0.0;
    double s_l = 0.0;
    Mode mode = Mode::Custom;

    // Derives the mode from the ratios and validates ranges.
    static AllocationPlan make(double s_v, double s_l);
};

const char* to_string(AllocationPlan::Mode m);

// All (s_v, s_l) with s_v + s_l == budget_sum and both in [0, 1]. The s_v
// grid starts at max(0, budget_sum - 1), advances by `step`, and the feasible
// maximum min(1, budget_sum) is always included even when off-grid.
std::vector<AllocationPlan> enumerate_allocations(double budget_sum, double step);

struct SweepRow {
    double s_v = 0.0;
    double s_l = 0.0;
    std::string metric;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0; // sample stddev over seeds (0 for one seed)
    std::size_t seed_count = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

using ModelFactory = std::function<ToyVlm(std::uint64_t seed)>;

// For each (plan, seed): build the model, score once per seed (metric is a
// pure function of the dense weights), mask vision layers at s_v and language
// layers at s_l (unstructured, metric's default grouping), and evaluate
// accuracy. Rows aggregate over seeds in plan order.
SweepResult run_sweep(const ModelFactory& factory, const std::vector<AllocationPlan>& plans,
                      ScoringMetric metric, const SampleSet& calib, const SampleSet& eval,
                      const std::vector<std::uint64_t>& seeds);

// Masks the model per plan: vision layers at plan.s_v, language layers at
// plan.s_l, using precomputed scores.
void apply_allocation(ToyVlm& model, const AllocationPlan& plan, const ScoreMap& scores,
                      ComparisonGroup group);

} // namespace svlm

#include "svlm/planner.hpp"

#include <algorithm>
#include <cmath>

#include "svlm/errors.hpp"
#include "svlm/sparse_lora.hpp"

namespace svlm {

namespace {
constexpr double kGridEps = 1e-9;
}

AllocationPlan AllocationPlan::make(double s_v, double s_l) {
    if (!(s_v >= 0.0 && s_v <= 1.0 && s_l >= 0.0 && s_l <= 1.0))
        throw InputError("AllocationPlan: ratios must lie in [0, 1]");
    AllocationPlan plan;
    plan.s_v = s_v;
    plan.s_l = s_l;
    if (std::abs(s_v - s_l) < kGridEps)
        plan.mode = Mode::Joint;
    else if (s_l < kGridEps)
        plan.mode = Mode::VisionOnly;
    else if (s_v < kGridEps)
        plan.mode = Mode::LanguageOnly;
    else
        plan.mode = Mode::Custom;
    return plan;
}

const char* to_string(AllocationPlan::Mode m) {
    switch (m) {
        case AllocationPlan::Mode::Joint: return "joint";
        case AllocationPlan::Mode::VisionOnly: return "vision_only";
        case AllocationPlan::Mode::LanguageOnly: return "language_only";
        case AllocationPlan::Mode::Custom: return "custom";
    }
    return "?";
}

std::vector<AllocationPlan> enumerate_allocations(double budget_sum, double step) {
    if (!(budget_sum > 0.0 && budget_sum <= 2.0))
        throw InputError("enumerate_allocations: budget_sum must lie in (0, 2]");
    if (!(step > 0.0 && step <= budget_sum))
        throw InputError("enumerate_allocations: step must lie in (0, budget_sum]");

    const double lo = std::max(0.0, budget_sum - 1.0);
    const double hi = std::min(1.0, budget_sum);
    std::vector<AllocationPlan> plans;
    double s_v = lo;
    while (s_v < hi - kGridEps) {
        plans.push_back(AllocationPlan::make(s_v, std::clamp(budget_sum - s_v, 0.0, 1.0)));
        s_v += step;
    }
    plans.push_back(AllocationPlan::make(hi, std::clamp(budget_sum - hi, 0.0, 1.0)));
    return plans;
}

void apply_allocation(ToyVlm& model, const AllocationPlan& plan, const ScoreMap& scores,
                      ComparisonGroup group) {
    MaskMap masks;
    for (const auto& [name, s] : scores) {
        const Modality modality = model.layer(name).modality;
        if (modality == Modality::Interface) continue;
        const double ratio = modality == Modality::Vision ? plan.s_v : plan.s_l;
        masks.emplace(name, build_mask(s, SparsitySpec::unstructured(ratio, group)));
    }
    apply_masks(model, masks);
}

SweepResult run_sweep(const ModelFactory& factory, const std::vector<AllocationPlan>& plans,
                      ScoringMetric metric, const SampleSet& calib, const SampleSet& eval,
                      const std::vector<std::uint64_t>& seeds) {
    if (plans.empty()) throw InputError("run_sweep: no allocation plans");
    if (seeds.empty()) throw InputError("run_sweep: no seeds");

    const ComparisonGroup group = default_group(metric);

    // Accuracy per (plan, seed); models and scores are built once per seed.
    std::vector<std::vector<double>> accuracy(plans.size());
    for (const std::uint64_t seed : seeds) {
        ToyVlm model = factory(seed);
        const ScoreMap scores = score(model, metric, calib);
        for (std::size_t p = 0; p < plans.size(); ++p) {
            apply_allocation(model, plans[p], scores, group);
            accuracy[p].push_back(evaluate_accuracy(model, eval));
        }
    }

    SweepResult result;
    for (std::size_t p = 0; p < plans.size(); ++p) {
        const std::vector<double>& acc = accuracy[p];
        double mean = 0.0;
        for (double a : acc) mean += a;
        mean /= static_cast<double>(acc.size());
        double var = 0.0;
        if (acc.size() > 1) {
            for (double a : acc) var += (a - mean) * (a - mean);
            var /= static_cast<double>(acc.size() - 1);
        }
        result.rows.push_back({plans[p].s_v, plans[p].s_l, to_string(metric), mean, std::sqrt(var),
                               acc.size()});
    }
    return result;
}

} // namespace svlm

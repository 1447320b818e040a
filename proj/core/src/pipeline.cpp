#include "svlm/pipeline.hpp"

#include "svlm/pretrain.hpp"
#include "svlm/report.hpp"

namespace svlm {

ToyVlm build_baseline(const VlmDims& dims, std::uint64_t seed, const SampleSet& train,
                      const PretrainConfig& pretrain_cfg) {
    ToyVlm model = ToyVlm::random(dims, seed);
    PretrainConfig cfg = pretrain_cfg;
    cfg.seed = seed;
    pretrain(model, train, cfg);
    return model;
}

MaskMap plan_masks(const ToyVlm& model, const PruneConfig& prune, const SampleSet& calib) {
    ScoreMap scores = score(model, prune.metric, calib);
    ScoreMap in_scope;
    for (auto& [name, s] : scores)
        if (prune.scope.contains(model.layer(name).modality)) in_scope.emplace(name, std::move(s));
    SparsitySpec spec = prune.spec;
    spec.group = prune.effective_group();
    return build_masks(in_scope, spec);
}

void prune_in_place(ToyVlm& model, const PruneConfig& prune, const SampleSet& calib) {
    apply_masks(model, plan_masks(model, prune, calib));
}

TrainingReport finetune_in_place(ToyVlm& model, const RunConfig& cfg, const SampleSet& train,
                                 bool merge) {
    attach_adapters(model, cfg.train, cfg.train_scope);
    TrainingReport report = svlm::train(model, train, cfg.train);
    if (merge) merge_adapters(model);
    return report;
}

EvalResult evaluate_model(const ToyVlm& model, const SampleSet& eval) {
    EvalResult result;
    result.sample_count = eval.size();
    result.accuracy = evaluate_accuracy(model, eval);

    std::vector<double> all_logits;
    all_logits.reserve(eval.size() * model.dims().n_classes);
    for (const Sample& s : eval) {
        ForwardResult fr = forward(model, s.vision_in, s.text_in, WeightMode::MaskedStudent);
        all_logits.insert(all_logits.end(), fr.logits.begin(), fr.logits.end());
    }
    result.logit_checksum = checksum_f64(all_logits);

    for (Modality m : {Modality::Vision, Modality::Language, Modality::Interface})
        result.sparsity[to_string(m)] = measured_sparsity(model, {m});
    result.sparsity["overall"] =
        measured_sparsity(model, {Modality::Vision, Modality::Language, Modality::Interface});
    return result;
}

} // namespace svlm

#include "svlm/sparse_lora.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svlm/errors.hpp"
#include "svlm/rng.hpp"

namespace svlm {

void TrainConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("TrainConfig: lambda must lie in [0, 1]");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw InputError("TrainConfig: warmup_fraction must lie in [0, 1)");
    if (batch_size == 0) throw InputError("TrainConfig: batch_size must be positive");
    if (rank_vision == 0 || rank_language == 0 || rank_interface == 0)
        throw InputError("TrainConfig: adapter ranks must be >= 1");
    if (!(lr > 0.0)) throw InputError("TrainConfig: lr must be positive");
}

std::size_t TrainConfig::rank_for(Modality m) const {
    switch (m) {
        case Modality::Vision: return rank_vision;
        case Modality::Language: return rank_language;
        case Modality::Interface: return rank_interface;
    }
    return rank_vision;
}

OptimizerState OptimizerState::for_model(const ToyVlm& model, std::size_t total_steps) {
    OptimizerState state;
    state.total_steps = total_steps;
    for (const PrunableLayer& layer : model.layers()) {
        if (!layer.adapter) continue;
        AdapterOptState slots;
        slots.b_slot = AdamSlot(layer.adapter->b_mat.rows(), layer.adapter->b_mat.cols());
        slots.a_slot = AdamSlot(layer.adapter->a_mat.rows(), layer.adapter->a_mat.cols());
        state.adapters.emplace(layer.name, std::move(slots));
    }
    return state;
}

void attach_adapters(ToyVlm& model, const TrainConfig& cfg, const std::set<Modality>& scope) {
    cfg.validate();
    if (scope.empty()) throw InputError("attach_adapters: empty modality scope");
    for (const PrunableLayer& layer : model.layers())
        if (scope.contains(layer.modality) && layer.adapter)
            throw StateError("attach_adapters: layer " + layer.name + " already has an adapter");

    Rng rng = Rng(cfg.seed).fork(/*stream_tag=*/4); // adapter stream
    for (PrunableLayer& layer : model.mutable_layers()) {
        if (!scope.contains(layer.modality)) continue;
        const std::size_t rank = cfg.rank_for(layer.modality);
        const std::size_t out = layer.w0.rows();
        const std::size_t in = layer.w0.cols();
        Adapter adapter;
        adapter.layer_name = layer.name;
        adapter.rank = rank;
        adapter.mode = cfg.adapter_mode;
        adapter.b_mat = Matrix(out, rank);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        adapter.a_mat = Matrix::random_uniform(rank, in, rng, -bound, bound);
        layer.adapter = std::move(adapter);
    }
}

std::pair<Matrix, Matrix> adapter_gradients(const Adapter& adapter, const BitMask& mask,
                                            const Matrix& dw) {
    const Matrix g = adapter.mode == Adapter::Mode::Sparse ? hadamard_mask(dw, mask) : dw;
    Matrix db = matmul(g, transpose(adapter.a_mat));
    Matrix da = matmul(transpose(adapter.b_mat), g);
    return {std::move(db), std::move(da)};
}

namespace {

std::vector<std::string> adapted_layers(const ToyVlm& model) {
    std::vector<std::string> names;
    for (const PrunableLayer& layer : model.layers())
        if (layer.adapter) names.push_back(layer.name);
    return names;
}

} // namespace

LossBreakdown train_step(ToyVlm& model, std::span<const Sample> batch, const TrainConfig& cfg,
                         OptimizerState& opt) {
    cfg.validate();
    const std::vector<std::string> adapted = adapted_layers(model);
    if (adapted.empty()) throw StateError("train_step: no adapters attached");
    if (batch.empty()) throw InputError("train_step: empty batch");

    std::map<std::string, Matrix> grad_acc;
    for (const std::string& name : adapted) {
        const Matrix& w0 = model.layer(name).w0;
        grad_acc.emplace(name, Matrix(w0.rows(), w0.cols()));
    }

    double task_sum = 0.0, distill_sum = 0.0;
    const std::size_t n_classes = model.dims().n_classes;

    for (const Sample& s : batch) {
        ForwardResult student = forward(model, s.vision_in, s.text_in, WeightMode::MaskedStudent);
        LossWithGrad task = task_loss(student.logits, s.label);
        std::vector<double> dlogits(n_classes, 0.0);
        for (std::size_t k = 0; k < n_classes; ++k) dlogits[k] = cfg.lambda * task.dlogits[k];
        double distill_val = 0.0;
        if (cfg.lambda < 1.0) {
            ForwardResult teacher = forward(model, s.vision_in, s.text_in, WeightMode::DenseTeacher);
            LossWithGrad distill = distill_loss(student.logits, teacher.logits);
            distill_val = distill.loss;
            for (std::size_t k = 0; k < n_classes; ++k)
                dlogits[k] += (1.0 - cfg.lambda) * distill.dlogits[k];
        }
        task_sum += task.loss;
        distill_sum += distill_val;

        GradientSet grads = backward(model, student.tape, dlogits);
        for (auto& [name, acc] : grad_acc) {
            const Matrix& dw = grads.at(name).dw;
            for (std::size_t k = 0; k < acc.size(); ++k) acc.data()[k] += dw.data()[k];
        }
    }

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    ++opt.step;
    const double lr = warmup_lr(cfg.lr, opt.step, opt.total_steps, cfg.warmup_fraction);

    for (const std::string& name : adapted) {
        PrunableLayer& layer = model.mutable_layer(name);
        const Matrix g_mean = scale(grad_acc.at(name), inv_n);
        auto [db, da] = adapter_gradients(*layer.adapter, layer.mask, g_mean);
        AdapterOptState& slots = opt.adapters.at(name);
        if (cfg.optimizer == TrainConfig::Optimizer::Adam) {
            adam_update(layer.adapter->b_mat, db, slots.b_slot, cfg.adam, lr, opt.step);
            adam_update(layer.adapter->a_mat, da, slots.a_slot, cfg.adam, lr, opt.step);
        } else {
            sgd_update(layer.adapter->b_mat, db, lr);
            sgd_update(layer.adapter->a_mat, da, lr);
        }
    }

    return make_breakdown(task_sum * inv_n, distill_sum * inv_n, cfg.lambda);
}

void merge_adapters(ToyVlm& model) {
    if (adapted_layers(model).empty()) throw StateError("merge_adapters: no adapters attached");
    for (PrunableLayer& layer : model.mutable_layers()) {
        if (!layer.adapter) continue;
        const Matrix increment = layer.adapter->increment();
        if (layer.adapter->mode == Adapter::Mode::Sparse) {
            layer.w0 = add(hadamard_mask(layer.w0, layer.mask), hadamard_mask(increment, layer.mask));
        } else {
            layer.w0 = add(hadamard_mask(layer.w0, layer.mask), increment);
            layer.mask = BitMask::ones(layer.mask.rows(), layer.mask.cols());
        }
        layer.adapter.reset();
    }
}

LossBreakdown TrainingReport::final_loss() const {
    return steps.empty() ? LossBreakdown{} : steps.back().loss;
}

TrainingReport train(ToyVlm& model, const SampleSet& data, const TrainConfig& cfg) {
    cfg.validate();
    if (adapted_layers(model).empty()) throw StateError("train: no adapters attached");
    TrainingReport report;
    if (data.empty()) return report;

    const std::size_t batches_per_epoch = (data.size() + cfg.batch_size - 1) / cfg.batch_size;
    OptimizerState opt = OptimizerState::for_model(model, cfg.epochs * batches_per_epoch);

    Rng shuffle_rng = Rng(cfg.seed).fork(/*stream_tag=*/3); // shuffle stream
    std::vector<std::size_t> order(data.size());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Fisher-Yates, high index down.
        for (std::size_t i = order.size(); i-- > 1;)
            std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

        std::vector<Sample> batch;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, order.size());
            batch.clear();
            for (std::size_t k = start; k < end; ++k) batch.push_back(data[order[k]]);
            LossBreakdown loss = train_step(model, batch, cfg, opt);
            report.steps.push_back(
                {opt.step, warmup_lr(cfg.lr, opt.step, opt.total_steps, cfg.warmup_fraction), loss});
        }
    }
    return report;
}

double evaluate_accuracy(const ToyVlm& model, const SampleSet& eval) {
    if (eval.empty()) throw InputError("evaluate_accuracy: empty evaluation set");
    std::size_t correct = 0;
    for (const Sample& s : eval) {
        ForwardResult fr = forward(model, s.vision_in, s.text_in, WeightMode::MaskedStudent);
        const std::size_t pred = static_cast<std::size_t>(
            std::max_element(fr.logits.begin(), fr.logits.end()) - fr.logits.begin());
        correct += pred == s.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(eval.size());
}

} // namespace svlm

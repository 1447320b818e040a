#include "svlm/pretrain.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "svlm/errors.hpp"
#include "svlm/objectives.hpp"
#include "svlm/rng.hpp"

namespace svlm {

void PretrainConfig::validate() const {
    if (batch_size == 0) throw InputError("PretrainConfig: batch_size must be positive");
    if (!(lr > 0.0)) throw InputError("PretrainConfig: lr must be positive");
    if (!(weight_dropout >= 0.0 && weight_dropout < 1.0))
        throw InputError("PretrainConfig: weight_dropout must lie in [0, 1)");
    if (l1_penalty < 0.0) throw InputError("PretrainConfig: l1_penalty must be >= 0");
}

double pretrain(ToyVlm& model, const SampleSet& data, const PretrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) return 0.0;

    struct LayerSlots {
        AdamSlot weight;
        AdamSlot bias; // bias treated as a 1 x n matrix
    };
    std::map<std::string, LayerSlots> slots;
    for (const PrunableLayer& layer : model.layers()) {
        LayerSlots s;
        s.weight = AdamSlot(layer.w0.rows(), layer.w0.cols());
        s.bias = AdamSlot(1, layer.bias.size());
        slots.emplace(layer.name, std::move(s));
    }

    Rng shuffle_rng = Rng(cfg.seed).fork(/*stream_tag=*/5); // pretrain shuffle stream
    Rng dropout_rng = Rng(cfg.seed).fork(/*stream_tag=*/6); // weight-dropout stream
    const double keep_p = 1.0 - cfg.weight_dropout;
    std::vector<std::size_t> order(data.size());
    std::size_t step = 0;
    double epoch_loss = 0.0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = order.size(); i-- > 1;)
            std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, order.size());
            const std::size_t count = end - start;

            // One dropout mask per prunable layer per batch; weights kept are
            // rescaled so the expected pre-activation is unchanged.
            std::map<std::string, BitMask> drop;
            std::map<std::string, Matrix> saved;
            if (cfg.weight_dropout > 0.0) {
                for (PrunableLayer& layer : model.mutable_layers()) {
                    if (!layer.prunable()) continue;
                    BitMask m = BitMask::ones(layer.w0.rows(), layer.w0.cols());
                    for (std::size_t k = 0; k < m.size(); ++k)
                        m.set_flat(k, dropout_rng.uniform01() < keep_p);
                    saved.emplace(layer.name, layer.w0);
                    layer.w0 = scale(hadamard_mask(layer.w0, m), 1.0 / keep_p);
                    drop.emplace(layer.name, std::move(m));
                }
            }

            std::map<std::string, LayerGrad> acc;
            for (const PrunableLayer& layer : model.layers())
                acc.emplace(layer.name, LayerGrad{Matrix(layer.w0.rows(), layer.w0.cols()),
                                                  std::vector<double>(layer.bias.size(), 0.0)});

            for (std::size_t k = start; k < end; ++k) {
                const Sample& s = data[order[k]];
                ForwardResult fr = forward(model, s.vision_in, s.text_in, WeightMode::DenseTeacher);
                LossWithGrad task = task_loss(fr.logits, s.label);
                loss_sum += task.loss;
                GradientSet grads = backward(model, fr.tape, task.dlogits);
                for (auto& [name, a] : acc) {
                    const LayerGrad& g = grads.at(name);
                    for (std::size_t i = 0; i < a.dw.size(); ++i) a.dw.data()[i] += g.dw.data()[i];
                    for (std::size_t i = 0; i < a.dbias.size(); ++i) a.dbias[i] += g.dbias[i];
                }
            }

            // Undo the dropout view; chain the gradients back through it.
            for (auto& [name, original] : saved) {
                model.mutable_layer(name).w0 = std::move(original);
                Matrix& dw = acc.at(name).dw;
                dw = scale(hadamard_mask(dw, drop.at(name)), 1.0 / keep_p);
            }

            const double inv_n = 1.0 / static_cast<double>(count);
            ++step;
            for (PrunableLayer& layer : model.mutable_layers()) {
                LayerGrad& g = acc.at(layer.name);
                LayerSlots& s = slots.at(layer.name);
                if (cfg.weight_decay > 0.0 && layer.prunable())
                    for (double& w : layer.w0.data()) w -= cfg.lr * cfg.weight_decay * w;
                adam_update(layer.w0, scale(g.dw, inv_n), s.weight, cfg.adam, cfg.lr, step);
                if (cfg.l1_penalty > 0.0 && layer.prunable()) {
                    const double shrink = cfg.lr * cfg.l1_penalty;
                    for (double& w : layer.w0.data()) {
                        if (w > shrink)
                            w -= shrink;
                        else if (w < -shrink)
                            w += shrink;
                        else
                            w = 0.0;
                    }
                }
                Matrix bias_mat(1, layer.bias.size(), layer.bias);
                Matrix bias_grad(1, g.dbias.size(), g.dbias);
                adam_update(bias_mat, scale(bias_grad, inv_n), s.bias, cfg.adam, cfg.lr, step);
                layer.bias = bias_mat.data();
            }
        }
        epoch_loss = loss_sum / static_cast<double>(data.size());
    }
    return epoch_loss;
}

} // namespace svlm

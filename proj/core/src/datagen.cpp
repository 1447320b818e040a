#include "svlm/datagen.hpp"

#include <string>

#include "svlm/errors.hpp"
#include "svlm/rng.hpp"

namespace svlm {

void TaskSpec::validate() const {
    if (n_classes < 2) throw InputError("TaskSpec: n_classes must be >= 2");
    if (n_classes > 0xFFFF) throw InputError("TaskSpec: n_classes exceeds the u16 label range");
    if (sigma < 0.0) throw InputError("TaskSpec: sigma must be >= 0");
    if (!(vision_scale > 0.0 && text_scale > 0.0))
        throw InputError("TaskSpec: prototype scales must be positive");
    if (d_v == 0 || d_t == 0) throw InputError("TaskSpec: input dims must be positive");
}

SampleSet generate(const TaskSpec& spec, std::size_t count, std::uint64_t seed) {
    spec.validate();
    Rng rng = Rng(seed).fork(/*stream_tag=*/2); // data stream

    std::vector<std::vector<double>> vision_protos(spec.n_classes, std::vector<double>(spec.d_v));
    std::vector<std::vector<double>> text_protos(spec.n_classes, std::vector<double>(spec.d_t));
    for (auto& proto : vision_protos)
        for (double& v : proto) v = spec.vision_scale * rng.normal();
    for (auto& proto : text_protos)
        for (double& v : proto) v = spec.text_scale * rng.normal();

    SampleSet samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t c_v = rng.uniform_int(spec.n_classes);
        const std::size_t c_t = rng.uniform_int(spec.n_classes);
        Sample s;
        s.vision_in = vision_protos[c_v];
        for (double& v : s.vision_in) v += spec.sigma * rng.normal();
        s.text_in = text_protos[c_t];
        for (double& v : s.text_in) v += spec.sigma * rng.normal();
        s.label = (c_v + c_t) % spec.n_classes;
        samples.push_back(std::move(s));
    }
    return samples;
}

Splits split(const SampleSet& data, std::size_t calib_count, std::size_t eval_count) {
    if (data.size() < calib_count + eval_count)
        throw InputError("split: need at least " + std::to_string(calib_count + eval_count) +
                         " samples, have " + std::to_string(data.size()));
    const std::size_t train_count = data.size() - calib_count - eval_count;
    Splits out;
    out.train.assign(data.begin(), data.begin() + train_count);
    out.calib.assign(data.begin() + train_count, data.begin() + train_count + calib_count);
    out.eval.assign(data.begin() + train_count + calib_count, data.end());
    return out;
}

} // namespace svlm

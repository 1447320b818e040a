#include "svlm/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "svlm/errors.hpp"

namespace svlm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed",
        "dims.d_v", "dims.h_v", "dims.d_q", "dims.d_t", "dims.h_l", "dims.classes",
        "data.count", "data.sigma", "data.calib", "data.eval", "data.vscale", "data.tscale",
        "prune.metric", "prune.pattern", "prune.ratio", "prune.n", "prune.m",
        "prune.group", "prune.scope",
        "train.lr", "train.epochs", "train.batch", "train.lambda", "train.warmup",
        "train.beta1", "train.beta2", "train.eps",
        "train.rank.vision", "train.rank.language", "train.rank.interface",
        "train.mode", "train.scope", "train.optimizer",
        "pretrain.lr", "pretrain.epochs", "pretrain.batch", "pretrain.dropout", "pretrain.decay", "pretrain.l1",
        "plan.budget", "plan.step", "plan.seeds",
    };
    return keys;
}

} // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw InputError("config line " + std::to_string(line_no) + ": empty key");
        config.values_[key] = value;
    }
    return config;
}

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

void KeyValueConfig::merge_from(const KeyValueConfig& overrides) {
    for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw InputError("config: key '" + key + "' expects a number, got '" + it->second + "'");
    }
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw InputError("config: key '" + key + "' expects an unsigned integer, got '" +
                         it->second + "'");
    }
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t fallback) const {
    return static_cast<std::size_t>(get_u64(key, fallback));
}

std::set<Modality> parse_modality_set(const std::string& csv) {
    std::set<Modality> scope;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        const std::string t = trim(token);
        if (!t.empty()) scope.insert(modality_from_string(t));
    }
    if (scope.empty()) throw InputError("modality list is empty: '" + csv + "'");
    return scope;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> seeds;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        const std::string t = trim(token);
        if (t.empty()) continue;
        try {
            std::size_t pos = 0;
            seeds.push_back(std::stoull(t, &pos));
            if (pos != t.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InputError("seed list: '" + t + "' is not an unsigned integer");
        }
    }
    if (seeds.empty()) throw InputError("seed list is empty: '" + csv + "'");
    return seeds;
}

TaskSpec RunConfig::task_spec() const {
    TaskSpec spec;
    spec.n_classes = dims.n_classes;
    spec.d_v = dims.d_v;
    spec.d_t = dims.d_t;
    spec.sigma = data.sigma;
    spec.vision_scale = data.vision_scale;
    spec.text_scale = data.text_scale;
    return spec;
}

RunConfig RunConfig::resolve(const std::optional<KeyValueConfig>& file_config,
                             const KeyValueConfig& cli_overrides) {
    KeyValueConfig merged;
    if (const char* env_seed = std::getenv("SVLM_SEED"); env_seed != nullptr && *env_seed != '\0')
        merged.set("seed", env_seed);
    if (file_config) merged.merge_from(*file_config);
    merged.merge_from(cli_overrides);
    return from_kv(merged);
}

RunConfig RunConfig::from_kv(const KeyValueConfig& kv) {
    for (const auto& [key, value] : kv.values())
        if (!known_keys().contains(key)) throw InputError("config: unknown key '" + key + "'");

    RunConfig cfg;
    cfg.seed = kv.get_u64("seed", cfg.seed);

    cfg.dims.d_v = kv.get_size("dims.d_v", cfg.dims.d_v);
    cfg.dims.h_v = kv.get_size("dims.h_v", cfg.dims.h_v);
    cfg.dims.d_q = kv.get_size("dims.d_q", cfg.dims.d_q);
    cfg.dims.d_t = kv.get_size("dims.d_t", cfg.dims.d_t);
    cfg.dims.h_l = kv.get_size("dims.h_l", cfg.dims.h_l);
    cfg.dims.n_classes = kv.get_size("dims.classes", cfg.dims.n_classes);

    cfg.data.count = kv.get_size("data.count", cfg.data.count);
    cfg.data.sigma = kv.get_double("data.sigma", cfg.data.sigma);
    cfg.data.calib_count = kv.get_size("data.calib", cfg.data.calib_count);
    cfg.data.eval_count = kv.get_size("data.eval", cfg.data.eval_count);
    cfg.data.vision_scale = kv.get_double("data.vscale", cfg.data.vision_scale);
    cfg.data.text_scale = kv.get_double("data.tscale", cfg.data.text_scale);

    cfg.prune.metric = metric_from_string(kv.get_string("prune.metric", "wanda"));
    const std::string pattern = kv.get_string("prune.pattern", "unstructured");
    const std::string group = kv.get_string("prune.group", "default");
    cfg.prune.group_explicit = group != "default";
    const ComparisonGroup parsed_group =
        cfg.prune.group_explicit ? group_from_string(group) : default_group(cfg.prune.metric);
    if (pattern == "unstructured") {
        cfg.prune.spec =
            SparsitySpec::unstructured(kv.get_double("prune.ratio", 0.5), parsed_group);
    } else if (pattern == "nm") {
        cfg.prune.spec = SparsitySpec::n_of_m(kv.get_size("prune.n", 2), kv.get_size("prune.m", 4));
    } else {
        throw InputError("config: prune.pattern must be 'unstructured' or 'nm'");
    }
    cfg.prune.scope = parse_modality_set(kv.get_string("prune.scope", "vision,language"));

    cfg.train.lr = kv.get_double("train.lr", cfg.train.lr);
    cfg.train.epochs = kv.get_size("train.epochs", cfg.train.epochs);
    cfg.train.batch_size = kv.get_size("train.batch", cfg.train.batch_size);
    cfg.train.lambda = kv.get_double("train.lambda", cfg.train.lambda);
    cfg.train.warmup_fraction = kv.get_double("train.warmup", cfg.train.warmup_fraction);
    cfg.train.adam.beta1 = kv.get_double("train.beta1", cfg.train.adam.beta1);
    cfg.train.adam.beta2 = kv.get_double("train.beta2", cfg.train.adam.beta2);
    cfg.train.adam.eps = kv.get_double("train.eps", cfg.train.adam.eps);
    cfg.train.rank_vision = kv.get_size("train.rank.vision", cfg.train.rank_vision);
    cfg.train.rank_language = kv.get_size("train.rank.language", cfg.train.rank_language);
    cfg.train.rank_interface = kv.get_size("train.rank.interface", cfg.train.rank_interface);
    const std::string mode = kv.get_string("train.mode", "sparse");
    if (mode == "sparse")
        cfg.train.adapter_mode = Adapter::Mode::Sparse;
    else if (mode == "dense")
        cfg.train.adapter_mode = Adapter::Mode::Dense;
    else
        throw InputError("config: train.mode must be 'sparse' or 'dense'");
    const std::string optimizer = kv.get_string("train.optimizer", "adam");
    if (optimizer == "adam")
        cfg.train.optimizer = TrainConfig::Optimizer::Adam;
    else if (optimizer == "sgd")
        cfg.train.optimizer = TrainConfig::Optimizer::Sgd;
    else
        throw InputError("config: train.optimizer must be 'adam' or 'sgd'");
    cfg.train.seed = cfg.seed;
    cfg.train_scope = parse_modality_set(kv.get_string("train.scope", "vision,language"));

    cfg.pretrain.lr = kv.get_double("pretrain.lr", cfg.pretrain.lr);
    cfg.pretrain.epochs = kv.get_size("pretrain.epochs", cfg.pretrain.epochs);
    cfg.pretrain.batch_size = kv.get_size("pretrain.batch", cfg.pretrain.batch_size);
    cfg.pretrain.weight_dropout = kv.get_double("pretrain.dropout", cfg.pretrain.weight_dropout);
    cfg.pretrain.weight_decay = kv.get_double("pretrain.decay", cfg.pretrain.weight_decay);
    cfg.pretrain.l1_penalty = kv.get_double("pretrain.l1", cfg.pretrain.l1_penalty);
    cfg.pretrain.seed = cfg.seed;

    cfg.plan.budget = kv.get_double("plan.budget", cfg.plan.budget);
    cfg.plan.step = kv.get_double("plan.step", cfg.plan.step);
    if (kv.has("plan.seeds")) cfg.plan.seeds = parse_seed_list(kv.get_string("plan.seeds", ""));

    cfg.train.validate();
    cfg.pretrain.validate();
    cfg.task_spec().validate();
    return cfg;
}

} // namespace svlm

// svlm command line: data generation, baseline training, pruning, sparsity
// planning, SparseLoRA finetuning, evaluation and checkpoint verification.
//
// Exit codes: 0 ok, 2 usage/config error, 3 data/checkpoint error,
// 4 invariant violation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "svlm/checkpoint.hpp"
#include "svlm/config.hpp"
#include "svlm/dataset_io.hpp"
#include "svlm/errors.hpp"
#include "svlm/pipeline.hpp"
#include "svlm/planner.hpp"
#include "svlm/pretrain.hpp"
#include "svlm/report.hpp"
#include "svlm/verify.hpp"

namespace fs = std::filesystem;
using svlm::RunConfig;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInvariant = 4;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets; // raw key=value overrides
    std::optional<double> lambda;  // common enough to deserve a flag
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path, "key=value config file");
    cmd->add_option("--set", opts.sets, "override one config key (key=value, repeatable)");
    cmd->add_option("--lambda", opts.lambda, "override train.lambda");
    cmd->add_option("--seed", opts.seed, "override seed");
}

RunConfig resolve_config(const CommonOpts& opts) {
    std::optional<svlm::KeyValueConfig> file_config;
    if (!opts.config_path.empty())
        file_config = svlm::KeyValueConfig::parse_file(opts.config_path);
    svlm::KeyValueConfig cli;
    for (const std::string& kv : opts.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw svlm::InputError("--set expects key=value, got '" + kv + "'");
        cli.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.lambda) cli.set("train.lambda", svlm::format_double(*opts.lambda));
    if (opts.seed) cli.set("seed", std::to_string(*opts.seed));
    return RunConfig::resolve(file_config, cli);
}

void require_writable(const fs::path& path) {
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::exists(parent) || !fs::is_directory(parent))
        throw svlm::InputError("output directory does not exist: " + parent.string());
    if (fs::exists(path) && fs::is_directory(path))
        throw svlm::InputError("output path is a directory: " + path.string());
}

svlm::Splits load_splits(const RunConfig& cfg, const fs::path& data_path) {
    const svlm::DatasetFile ds = svlm::load_dataset(data_path);
    if (ds.d_v != cfg.dims.d_v || ds.d_t != cfg.dims.d_t || ds.n_classes != cfg.dims.n_classes)
        throw svlm::DataError("dataset dims do not match config dims");
    return svlm::split(ds.samples, cfg.data.calib_count, cfg.data.eval_count);
}

int cmd_gen_data(const CommonOpts& common, const std::string& out, bool force) {
    const RunConfig cfg = resolve_config(common);
    require_writable(out);
    if (fs::exists(out) && !force)
        throw svlm::InputError("refusing to overwrite " + out + " (use --force)");
    svlm::DatasetFile ds;
    ds.d_v = cfg.dims.d_v;
    ds.d_t = cfg.dims.d_t;
    ds.n_classes = cfg.dims.n_classes;
    ds.samples = svlm::generate(cfg.task_spec(), cfg.data.count, cfg.seed);
    svlm::save_dataset(ds, out);
    std::cout << "wrote " << ds.samples.size() << " samples to " << out << "\n";
    return 0;
}

int cmd_init(const CommonOpts& common, const std::string& data, const std::string& out) {
    const RunConfig cfg = resolve_config(common);
    require_writable(out);
    const svlm::Splits splits = load_splits(cfg, data);
    svlm::ToyVlm model = svlm::build_baseline(cfg.dims, cfg.seed, splits.train, cfg.pretrain);
    svlm::CheckpointMeta meta;
    meta.stage = svlm::CheckpointStage::Raw;
    meta.seed = cfg.seed;
    svlm::save_checkpoint(model, meta, out);
    std::cout << "baseline accuracy " << svlm::format_double(svlm::evaluate_accuracy(model, splits.eval))
              << ", checkpoint " << out << "\n";
    return 0;
}

int cmd_prune(const CommonOpts& common, const std::string& in, const std::string& data,
              const std::string& out, const std::string& report_path) {
    const RunConfig cfg = resolve_config(common);
    require_writable(out);
    if (cfg.prune.metric != svlm::ScoringMetric::Magnitude && data.empty())
        throw svlm::InputError("metric '" + std::string(svlm::to_string(cfg.prune.metric)) +
                               "' needs calibration data (--data)");
    svlm::LoadedCheckpoint ckpt = svlm::load_checkpoint(in);
    svlm::SampleSet calib;
    if (!data.empty()) calib = load_splits(cfg, data).calib;
    svlm::prune_in_place(ckpt.model, cfg.prune, calib);

    svlm::CheckpointMeta meta = ckpt.meta;
    meta.stage = svlm::CheckpointStage::Pruned;
    meta.sparsity = svlm::SparsityProvenance::from_spec(cfg.prune.spec);
    svlm::save_checkpoint(ckpt.model, meta, out);
    if (!report_path.empty()) svlm::write_sparsity_csv(report_path, svlm::sparsity_rows(ckpt.model));
    std::cout << "pruned checkpoint " << out << "\n";
    return 0;
}

int cmd_plan(const CommonOpts& common, const std::string& data, const std::string& out) {
    const RunConfig cfg = resolve_config(common);
    require_writable(out);
    const svlm::Splits splits = load_splits(cfg, data);
    const auto plans = svlm::enumerate_allocations(cfg.plan.budget, cfg.plan.step);
    const svlm::ModelFactory factory = [&](std::uint64_t seed) {
        return svlm::build_baseline(cfg.dims, seed, splits.train, cfg.pretrain);
    };
    const svlm::SweepResult result = svlm::run_sweep(factory, plans, cfg.prune.metric, splits.calib,
                                                     splits.eval, cfg.plan.seeds);
    svlm::write_sweep_csv(out, result);
    std::cout << "sweep over " << plans.size() << " allocations x " << cfg.plan.seeds.size()
              << " seeds -> " << out << "\n";
    return 0;
}

int cmd_finetune(const CommonOpts& common, const std::string& in, const std::string& data,
                 const std::string& out, const std::string& log_path,
                 const std::string& report_path, bool no_merge) {
    const RunConfig cfg = resolve_config(common);
    require_writable(out);
    svlm::LoadedCheckpoint ckpt = svlm::load_checkpoint(in);
    const svlm::Splits splits = load_splits(cfg, data);
    const svlm::TrainingReport report =
        svlm::finetune_in_place(ckpt.model, cfg, splits.train, /*merge=*/!no_merge);

    svlm::CheckpointMeta meta = ckpt.meta;
    meta.stage = no_merge ? svlm::CheckpointStage::Pruned : svlm::CheckpointStage::Merged;
    svlm::save_checkpoint(ckpt.model, meta, out);
    if (!log_path.empty()) svlm::write_training_csv(log_path, report);
    if (!report_path.empty()) svlm::write_sparsity_csv(report_path, svlm::sparsity_rows(ckpt.model));
    std::cout << "restored checkpoint " << out << " (" << report.steps.size() << " steps)\n";
    return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& data, const std::string& out) {
    const svlm::LoadedCheckpoint ckpt = svlm::load_checkpoint(ckpt_path);
    const svlm::DatasetFile ds = svlm::load_dataset(data);
    const svlm::EvalResult result = svlm::evaluate_model(ckpt.model, ds.samples);

    nlohmann::ordered_json doc;
    doc["accuracy"] = result.accuracy;
    doc["samples"] = result.sample_count;
    doc["sparsity"] = nlohmann::ordered_json::object();
    for (const auto& [scope, value] : result.sparsity) doc["sparsity"][scope] = value;
    doc["logit_checksum"] = result.logit_checksum;
    doc["stage"] = svlm::to_string(ckpt.meta.stage);
    const std::string text = doc.dump(2) + "\n";

    if (out.empty()) {
        std::cout << text;
    } else {
        require_writable(out);
        std::ofstream file(out, std::ios::binary | std::ios::trunc);
        file << text;
        if (!file) throw svlm::DataError("cannot write " + out);
    }
    return 0;
}

int cmd_verify(const std::string& ckpt_path, std::optional<std::pair<int, int>> expect_nm) {
    svlm::LoadedCheckpoint ckpt = svlm::load_checkpoint(ckpt_path);
    if (expect_nm) {
        ckpt.meta.sparsity.pattern = svlm::SparsityProvenance::Pattern::NofM;
        ckpt.meta.sparsity.n = static_cast<std::uint32_t>(expect_nm->first);
        ckpt.meta.sparsity.m = static_cast<std::uint32_t>(expect_nm->second);
    }
    const svlm::VerifyReport report = svlm::verify_checkpoint(ckpt);
    for (const svlm::VerifyCheck& check : report.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name;
        if (!check.pass && !check.detail.empty()) std::cout << " (" << check.detail << ")";
        std::cout << "\n";
    }
    return report.all_pass() ? 0 : kExitInvariant;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"toy two-modality model compression: prune, plan, restore"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic SVLD1 dataset");
    std::string gen_out;
    bool gen_force = false;
    add_common(gen, common);
    gen->add_option("-o,--out", gen_out, "output dataset path")->required();
    gen->add_flag("--force", gen_force, "overwrite an existing file");

    auto* init = app.add_subcommand("init", "train the dense baseline checkpoint");
    std::string init_data, init_out;
    add_common(init, common);
    init->add_option("-d,--data", init_data, "SVLD1 dataset path")->required();
    init->add_option("-o,--out", init_out, "output checkpoint path")->required();

    auto* prune = app.add_subcommand("prune", "score and mask a checkpoint");
    std::string prune_in, prune_data, prune_out, prune_report;
    add_common(prune, common);
    prune->add_option("-i,--in", prune_in, "input checkpoint")->required();
    prune->add_option("-d,--data", prune_data, "SVLD1 dataset (calibration source)");
    prune->add_option("-o,--out", prune_out, "output checkpoint")->required();
    prune->add_option("--report", prune_report, "sparsity report CSV path");

    auto* plan = app.add_subcommand("plan", "sweep modality sparsity allocations");
    std::string plan_data, plan_out;
    add_common(plan, common);
    plan->add_option("-d,--data", plan_data, "SVLD1 dataset path")->required();
    plan->add_option("-o,--out", plan_out, "output CSV path")->required();

    auto* finetune = app.add_subcommand("finetune", "restore a pruned checkpoint with adapters");
    std::string ft_in, ft_data, ft_out, ft_log, ft_report;
    bool ft_no_merge = false;
    add_common(finetune, common);
    finetune->add_option("-i,--in", ft_in, "input (pruned) checkpoint")->required();
    finetune->add_option("-d,--data", ft_data, "SVLD1 dataset path")->required();
    finetune->add_option("-o,--out", ft_out, "output checkpoint")->required();
    finetune->add_option("--log", ft_log, "training curve CSV path");
    finetune->add_option("--report", ft_report, "post-finetune sparsity report CSV path");
    finetune->add_flag("--no-merge", ft_no_merge, "keep adapters unmerged in the output");

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    std::string eval_ckpt, eval_data, eval_out;
    eval->add_option("--ckpt", eval_ckpt, "checkpoint path")->required();
    eval->add_option("-d,--data", eval_data, "SVLD1 dataset path")->required();
    eval->add_option("-o,--out", eval_out, "metrics JSON path (stdout if omitted)");

    auto* verify = app.add_subcommand("verify", "audit checkpoint invariants");
    std::string verify_ckpt;
    std::string verify_nm;
    verify->add_option("--ckpt", verify_ckpt, "checkpoint path")->required();
    verify->add_option("--nm", verify_nm, "check an explicit N:M pattern, e.g. 2:4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(common, gen_out, gen_force);
        if (init->parsed()) return cmd_init(common, init_data, init_out);
        if (prune->parsed()) return cmd_prune(common, prune_in, prune_data, prune_out, prune_report);
        if (plan->parsed()) return cmd_plan(common, plan_data, plan_out);
        if (finetune->parsed())
            return cmd_finetune(common, ft_in, ft_data, ft_out, ft_log, ft_report, ft_no_merge);
        if (eval->parsed()) return cmd_eval(eval_ckpt, eval_data, eval_out);
        if (verify->parsed()) {
            std::optional<std::pair<int, int>> nm;
            if (!verify_nm.empty()) {
                const auto colon = verify_nm.find(':');
                if (colon == std::string::npos)
                    throw svlm::InputError("--nm expects N:M, e.g. 2:4");
                nm = {std::stoi(verify_nm.substr(0, colon)), std::stoi(verify_nm.substr(colon + 1))};
            }
            return cmd_verify(verify_ckpt, nm);
        }
    } catch (const svlm::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const svlm::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const svlm::StateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

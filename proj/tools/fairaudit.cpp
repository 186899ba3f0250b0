// fairaudit: fetch, prepare, reweigh, audit, run, sweep.
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 training failure.

#include "fairaudit/csv.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/errors.hpp"
#include "fairaudit/experiment.hpp"
#include "fairaudit/fetch.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/prepare.hpp"
#include "fairaudit/reweighing.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace fairaudit;

std::string find_default_manifest(const char* argv0) {
    std::vector<fs::path> candidates = {fs::path("share/dataset_manifest.json")};
    std::error_code ec;
    fs::path exe = fs::weakly_canonical(fs::path(argv0), ec);
    if (!ec && exe.has_parent_path()) {
        fs::path dir = exe.parent_path();
        for (int up = 0; up < 3; ++up) {
            candidates.push_back(dir / "share/dataset_manifest.json");
            dir = dir.parent_path();
        }
    }
    for (const fs::path& candidate : candidates)
        if (fs::exists(candidate, ec)) return candidate.string();
    throw UsageError("cannot locate share/dataset_manifest.json; pass --manifest");
}

DatasetId dataset_from_string(const std::string& value) {
    if (value == "adult") return DatasetId::adult;
    if (value == "compas") return DatasetId::compas;
    throw UsageError("unknown dataset '" + value + "' (expected adult or compas)");
}

ProtectedAttr protected_from_string(const std::string& value) {
    if (value == "race") return ProtectedAttr::race;
    if (value == "sex") return ProtectedAttr::sex;
    throw UsageError("unknown protected attribute '" + value + "' (expected race or sex)");
}

std::vector<ModelSpec> models_from_string(const std::string& value) {
    std::vector<ModelSpec> specs;
    if (value == "all") return specs;
    std::istringstream in(value);
    std::string slug;
    while (std::getline(in, slug, ',')) {
        if (slug.empty()) continue;
        auto kind = kind_from_slug(slug);
        if (!kind) throw UsageError("unknown model '" + slug + "'");
        ModelSpec spec;
        spec.kind = *kind;
        specs.push_back(spec);
    }
    if (specs.empty()) throw UsageError("empty model list");
    return specs;
}

/// Locate the raw files for a dataset under the data directory.
std::vector<std::string> raw_paths(DatasetId id, const std::string& data_dir) {
    fs::path base = fs::path(data_dir) / dataset_slug(id);
    std::vector<std::vector<std::string>> layouts;
    if (id == DatasetId::adult)
        layouts = {{(base / "adult-all.csv").string()},
                   {(base / "adult.data").string(), (base / "adult.test").string()}};
    else
        layouts = {{(base / "compas-scores-two-years.csv").string()}};

    for (const std::vector<std::string>& layout : layouts) {
        bool all = true;
        for (const std::string& path : layout)
            if (!fs::exists(path)) all = false;
        if (all) return layout;
    }
    throw DataError("no raw files for '" + std::string(dataset_slug(id)) + "' under '" +
                    data_dir + "'; run: fairaudit fetch --dataset " + dataset_slug(id));
}

Prepared prepare_from_disk(DatasetId id, ProtectedAttr attr, const std::string& data_dir,
                           const std::vector<std::string>& inputs, bool standardize) {
    std::vector<std::string> paths = inputs.empty() ? raw_paths(id, data_dir) : inputs;
    PrepareOptions options;
    options.standardize = standardize;
    if (id == DatasetId::adult)
        return prepare_adult(load_adult_table(paths), attr, options);
    if (paths.size() != 1)
        throw UsageError("compas expects exactly one input file");
    return prepare_compas(load_compas_table(paths[0]), attr, options);
}

void print_report(const FairnessReport& report, bool as_json, std::ostream& out) {
    if (as_json) {
        out << "{\n";
        auto field = [&](const char* name, double v, bool last = false) {
            out << "  \"" << name << "\": ";
            if (std::isinf(v)) out << "\"" << metric_to_string(v) << "\"";
            else out << metric_to_string(v);
            out << (last ? "\n" : ",\n");
        };
        field("ba", report.ba);
        field("spd", report.spd);
        field("aod", report.aod);
        field("di", report.di);
        field("eod", report.eod);
        field("ti", report.ti, true);
        out << "}\n";
    } else {
        out << "balanced accuracy        " << metric_to_string(report.ba) << "\n"
            << "statistical parity diff  " << metric_to_string(report.spd) << "\n"
            << "average odds diff        " << metric_to_string(report.aod) << "\n"
            << "disparate impact         " << metric_to_string(report.di) << "\n"
            << "equal opportunity diff   " << metric_to_string(report.eod) << "\n"
            << "theil index              " << metric_to_string(report.ti) << "\n";
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"fairness audit toolkit: group-weighted bias mitigation for "
                 "binary classifiers"};
    app.require_subcommand(1);

    // fetch
    auto* fetch_cmd = app.add_subcommand("fetch", "download and verify a raw dataset");
    std::string fetch_dataset_name, fetch_out = "data", fetch_manifest;
    fetch_cmd->add_option("--dataset", fetch_dataset_name, "adult or compas")->required();
    fetch_cmd->add_option("--out", fetch_out, "data directory (default: data)");
    fetch_cmd->add_option("--manifest", fetch_manifest, "manifest JSON path");

    // prepare
    auto* prepare_cmd = app.add_subcommand("prepare", "encode a raw table for auditing");
    std::string prep_dataset, prep_protected, prep_out, prep_data = "data";
    std::vector<std::string> prep_inputs;
    bool prep_no_standardize = false;
    prepare_cmd->add_option("--dataset", prep_dataset, "adult or compas")->required();
    prepare_cmd->add_option("--protected", prep_protected, "race or sex")->required();
    prepare_cmd->add_option("--input", prep_inputs, "raw input file(s)");
    prepare_cmd->add_option("--data", prep_data, "data directory to search (default: data)");
    prepare_cmd->add_option("--out", prep_out, "output CSV (default: <dataset>_<protected>.csv)");
    prepare_cmd->add_flag("--no-standardize", prep_no_standardize,
                          "keep numeric columns on their original scale");

    // reweigh
    auto* reweigh_cmd = app.add_subcommand("reweigh", "apply group reweighing to a prepared CSV");
    std::string rw_input, rw_out;
    reweigh_cmd->add_option("--input", rw_input, "prepared dataset CSV")->required();
    reweigh_cmd->add_option("--out", rw_out, "output CSV")->required();

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "fairness report for a predictions CSV");
    std::string audit_input;
    bool audit_json = false;
    audit_cmd->add_option("input", audit_input, "CSV with pred,label,protected[,weight]")
        ->required();
    audit_cmd->add_flag("--json", audit_json, "print JSON instead of text");

    // run / sweep share their options
    auto* run_cmd = app.add_subcommand("run", "full before/after audit for a config");
    auto* sweep_cmd = app.add_subcommand("sweep", "decision-threshold sweep for a config");
    struct RunArgs {
        std::string config, out = "out", data = "data";
        std::string dataset, protected_attr, models, eval_split, grid;
        std::uint64_t seed = 0;
        double test_fraction = 0.0;
        CLI::Option *seed_opt = nullptr, *frac_opt = nullptr;
    };
    RunArgs run_args, sweep_args;
    for (auto [cmd, args] : {std::pair{run_cmd, &run_args}, {sweep_cmd, &sweep_args}}) {
        cmd->add_option("--config", args->config, "experiment config file");
        cmd->add_option("--out", args->out, "report directory (default: out)");
        cmd->add_option("--data", args->data, "data directory (default: data)");
        cmd->add_option("--dataset", args->dataset, "override: adult or compas");
        cmd->add_option("--protected", args->protected_attr, "override: race or sex");
        cmd->add_option("--models", args->models, "override: comma list or 'all'");
        args->seed_opt = cmd->add_option("--seed", args->seed, "override: RNG seed");
        args->frac_opt =
            cmd->add_option("--test-fraction", args->test_fraction, "override: test fraction");
        cmd->add_option("--eval-split", args->eval_split, "override: test or train");
        cmd->add_option("--grid", args->grid, "override: default | lo:step:hi | list");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 1;
    }

    if (fetch_cmd->parsed()) {
        if (fetch_manifest.empty()) fetch_manifest = find_default_manifest(argv[0]);
        auto entries = load_manifest(fetch_manifest);
        for (const FetchResult& r : fetch_dataset(entries, fetch_dataset_name, fetch_out))
            std::cout << (r.downloaded ? "fetched " : "verified ") << r.path << "\n";
        return 0;
    }

    if (prepare_cmd->parsed()) {
        DatasetId id = dataset_from_string(prep_dataset);
        ProtectedAttr attr = protected_from_string(prep_protected);
        Prepared prepared =
            prepare_from_disk(id, attr, prep_data, prep_inputs, !prep_no_standardize);
        if (prep_out.empty())
            prep_out = std::string(dataset_slug(id)) + "_" + protected_slug(attr) + ".csv";
        write_dataset_csv(prepared.data, prep_out);
        std::cout << "wrote " << prep_out << " (" << prepared.data.n() << " rows, "
                  << prepared.data.dim() << " features)\n";
        return 0;
    }

    if (reweigh_cmd->parsed()) {
        Dataset ds = read_dataset_csv(rw_input);
        FourWeights weights = compute_weights(count_groups(ds));
        write_dataset_csv(apply_reweighing(ds), rw_out);
        std::cout << "w(pos,priv)=" << metric_to_string(weights.w_pp)
                  << " w(pos,unpriv)=" << metric_to_string(weights.w_pup)
                  << " w(neg,priv)=" << metric_to_string(weights.w_np)
                  << " w(neg,unpriv)=" << metric_to_string(weights.w_nup) << "\n"
                  << "wrote " << rw_out << "\n";
        return 0;
    }

    if (audit_cmd->parsed()) {
        RawTable table = load_csv(audit_input, true);
        int pred_col = table.column_index("pred");
        int label_col = table.column_index("label");
        int prot_col = table.column_index("protected");
        int weight_col = table.column_index("weight");
        if (pred_col < 0 || label_col < 0 || prot_col < 0)
            throw DataError("audit: need columns pred,label,protected");
        auto bit = [&](const std::string& cell, std::size_t row) -> std::uint8_t {
            if (cell == "0") return 0;
            if (cell == "1") return 1;
            throw DataError("audit: row " + std::to_string(row + 1) +
                            ": expected 0 or 1, got '" + cell + "'");
        };
        LabelVec preds, labels, prot;
        WeightVec weights;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            preds.push_back(bit(table.rows[r][std::size_t(pred_col)], r));
            labels.push_back(bit(table.rows[r][std::size_t(label_col)], r));
            prot.push_back(bit(table.rows[r][std::size_t(prot_col)], r));
            if (weight_col >= 0) {
                char* end = nullptr;
                const std::string& cell = table.rows[r][std::size_t(weight_col)];
                double w = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() || *end != '\0')
                    throw DataError("audit: row " + std::to_string(r + 1) +
                                    ": bad weight '" + cell + "'");
                weights.push_back(w);
            } else {
                weights.push_back(1.0);
            }
        }
        print_report(full_report(preds, labels, prot, weights), audit_json, std::cout);
        return 0;
    }

    // run / sweep
    RunArgs& args = run_cmd->parsed() ? run_args : sweep_args;
    ExperimentConfig cfg;
    if (!args.config.empty()) cfg = parse_config_file(args.config);
    if (!args.dataset.empty()) cfg.dataset = dataset_from_string(args.dataset);
    if (!args.protected_attr.empty())
        cfg.protected_attr = protected_from_string(args.protected_attr);
    if (!args.models.empty()) cfg.models = models_from_string(args.models);
    if (args.seed_opt->count()) cfg.seed = args.seed;
    if (args.frac_opt->count()) cfg.test_fraction = args.test_fraction;
    if (!args.eval_split.empty()) {
        if (args.eval_split == "test") cfg.evaluation_split = EvalSplit::test;
        else if (args.eval_split == "train") cfg.evaluation_split = EvalSplit::train;
        else throw UsageError("--eval-split must be test or train");
    }
    if (!args.grid.empty()) cfg.threshold_grid = parse_grid_spec(args.grid);
    if (sweep_cmd->parsed() && cfg.threshold_grid.empty())
        cfg.threshold_grid = default_threshold_grid();
    cfg.validate();

    Prepared prepared = prepare_from_disk(cfg.dataset, cfg.protected_attr, args.data,
                                          {}, /*standardize=*/false);
    ExperimentOutput output = run_full(cfg, prepared.data);
    for (const std::string& path : emit_report(output, cfg, args.out))
        std::cerr << "wrote " << path << "\n";
    std::cout << render_markdown(output.results);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TrainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

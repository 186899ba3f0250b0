#include "fairaudit/experiment.hpp"

#include "fairaudit/errors.hpp"
#include "fairaudit/oracle.hpp"
#include "fairaudit/reweighing.hpp"
#include "fairaudit/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace fairaudit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double_value(const std::string& value, const std::string& key) {
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        throw UsageError("config: bad number '" + value + "' for " + key);
    return v;
}

std::uint64_t parse_u64_value(const std::string& value, const std::string& key) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw UsageError("config: bad integer '" + value + "' for " + key);
    return std::uint64_t(v);
}

std::string fmt4(double v) {
    if (std::isinf(v)) return v > 0 ? "∞" : "-∞";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string fmt17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json json_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::ordered_json json_metric(const std::optional<double>& v) {
    if (!v) return nullptr;
    return json_metric(*v);
}

} // namespace

const char* dataset_slug(DatasetId id) {
    return id == DatasetId::adult ? "adult" : "compas";
}

const char* phase_slug(Phase phase) {
    return phase == Phase::before ? "before" : "after";
}

void ExperimentConfig::validate() const {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw UsageError("config: test_fraction must lie strictly between 0 and 1");
    std::vector<ModelSpec> specs = effective_models();
    std::vector<bool> seen(5, false);
    for (const ModelSpec& spec : specs) {
        spec.validate();
        std::size_t at = std::size_t(spec.kind);
        if (seen[at])
            throw UsageError(std::string("config: model '") + kind_slug(spec.kind) +
                             "' listed twice");
        seen[at] = true;
    }
    for (double t : threshold_grid)
        if (!(t >= 0.0 && t <= 1.0))
            throw UsageError("config: grid thresholds must lie in [0,1]");
}

std::vector<ModelSpec> ExperimentConfig::effective_models() const {
    if (!models.empty()) return models;
    std::vector<ModelSpec> all;
    for (ModelKind kind : {ModelKind::logreg, ModelKind::dtree, ModelKind::knn,
                           ModelKind::gnb, ModelKind::rforest}) {
        ModelSpec spec;
        spec.kind = kind;
        all.push_back(spec);
    }
    return all;
}

std::vector<double> default_threshold_grid() {
    std::vector<double> grid;
    grid.reserve(101);
    for (int i = 0; i <= 100; ++i) grid.push_back(double(i) / 100.0);
    return grid;
}

std::vector<double> parse_grid_spec(const std::string& value) {
    if (value == "default") return default_threshold_grid();
    if (value.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::string item;
        std::istringstream in(value);
        while (std::getline(in, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3)
            throw UsageError("config: grid range must be lo:step:hi");
        double lo = parse_double_value(parts[0], "grid");
        double step = parse_double_value(parts[1], "grid");
        double hi = parse_double_value(parts[2], "grid");
        if (!(step > 0.0) || lo > hi)
            throw UsageError("config: grid range must satisfy lo <= hi, step > 0");
        std::vector<double> grid;
        for (int i = 0;; ++i) {
            double t = lo + double(i) * step;
            if (t > hi + 1e-12) break;
            grid.push_back(std::min(t, hi));
        }
        return grid;
    }
    std::vector<double> grid;
    for (const std::string& item : split_list(value))
        grid.push_back(parse_double_value(item, "grid"));
    if (grid.empty()) throw UsageError("config: empty grid");
    return grid;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: line " + std::to_string(lineno) +
                             ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw UsageError("config: line " + std::to_string(lineno) +
                             ": empty value for '" + key + "'");

        if (key == "dataset") {
            if (value == "adult") cfg.dataset = DatasetId::adult;
            else if (value == "compas") cfg.dataset = DatasetId::compas;
            else throw UsageError("config: unknown dataset '" + value + "'");
        } else if (key == "protected") {
            if (value == "race") cfg.protected_attr = ProtectedAttr::race;
            else if (value == "sex") cfg.protected_attr = ProtectedAttr::sex;
            else throw UsageError("config: unknown protected attribute '" + value + "'");
        } else if (key == "models") {
            cfg.models.clear();
            if (value != "all") {
                for (const std::string& slug : split_list(value)) {
                    auto kind = kind_from_slug(slug);
                    if (!kind) throw UsageError("config: unknown model '" + slug + "'");
                    ModelSpec spec;
                    spec.kind = *kind;
                    cfg.models.push_back(spec);
                }
                if (cfg.models.empty()) throw UsageError("config: empty model list");
            }
        } else if (key == "seed") {
            cfg.seed = parse_u64_value(value, key);
        } else if (key == "test_fraction") {
            cfg.test_fraction = parse_double_value(value, key);
        } else if (key == "evaluation_split") {
            if (value == "test") cfg.evaluation_split = EvalSplit::test;
            else if (value == "train") cfg.evaluation_split = EvalSplit::train;
            else throw UsageError("config: evaluation_split must be test or train");
        } else if (key == "grid") {
            cfg.threshold_grid = parse_grid_spec(value);
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

MetricValues metrics_at(const LabelVec& preds, const LabelVec& labels,
                        const LabelVec& privileged, const WeightVec& weights) {
    MetricValues out;
    auto attempt = [](std::optional<double>& slot, auto&& fn) {
        try {
            slot = fn();
        } catch (const DataError&) {
            slot = std::nullopt;
        }
    };
    attempt(out.ba, [&] { return balanced_accuracy(preds, labels, weights); });
    attempt(out.spd, [&] { return statistical_parity_difference(preds, privileged, weights); });
    attempt(out.aod, [&] { return average_odds_difference(confusion(preds, labels, privileged, weights)); });
    attempt(out.di, [&] { return disparate_impact(preds, privileged, weights); });
    attempt(out.eod, [&] { return equal_opportunity_difference(confusion(preds, labels, privileged, weights)); });
    attempt(out.ti, [&] { return theil_index(preds, labels); });
    return out;
}

} // namespace

ExperimentOutput run_full(const ExperimentConfig& cfg, const Dataset& prepared) {
    cfg.validate();
    prepared.validate();

    auto [train_split, test_split] = split(prepared, cfg.test_fraction, cfg.seed);

    // standardize numeric columns from training statistics only, so nothing
    // about the evaluation split leaks into the fitted models
    std::vector<std::size_t> numeric = numeric_columns_by_name(train_split);
    if (!numeric.empty()) {
        Standardizer st = Standardizer::fit(train_split, numeric);
        st.apply(train_split);
        st.apply(test_split);
    }

    Dataset reweighed = apply_reweighing(train_split);
    const Dataset& eval_split =
        cfg.evaluation_split == EvalSplit::test ? test_split : train_split;
    const WeightVec unit(eval_split.n(), 1.0);

    ExperimentOutput out;
    for (const ModelSpec& base : cfg.effective_models()) {
        for (Phase phase : {Phase::before, Phase::after}) {
            ModelSpec spec = base;
            // one seed per (model, phase) cell: cells are reproducible in
            // isolation and independent of the order they run in
            spec.seed = derive_seed(cfg.seed, 0xce11ULL + std::uint64_t(spec.kind),
                                    phase == Phase::before ? 0 : 1);
            const Dataset& fit_on = phase == Phase::before ? train_split : reweighed;
            try {
                std::unique_ptr<Model> model = train(spec, fit_on);
                std::vector<double> scores = predict_scores(*model, eval_split.features);

                RunResult result;
                result.kind = spec.kind;
                result.phase = phase;
                result.report = full_report(labels_from_scores(scores, 0.5),
                                            eval_split.labels, eval_split.privileged,
                                            unit);
                out.results.push_back(result);

                if (!cfg.threshold_grid.empty()) {
                    SweepSeries series;
                    series.kind = spec.kind;
                    series.phase = phase;
                    for (double t : cfg.threshold_grid) {
                        SweepPoint point;
                        point.threshold = t;
                        point.metrics = metrics_at(labels_from_scores(scores, t),
                                                   eval_split.labels,
                                                   eval_split.privileged, unit);
                        series.points.push_back(std::move(point));
                    }
                    out.sweeps.push_back(std::move(series));
                }
            } catch (const TrainError& e) {
                throw TrainError(std::string(kind_slug(spec.kind)) + "/" +
                                 phase_slug(phase) + ": " + e.what());
            } catch (const DataError& e) {
                throw DataError(std::string(kind_slug(spec.kind)) + "/" +
                                phase_slug(phase) + ": " + e.what());
            }
        }
    }
    return out;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, const Dataset& prepared) {
    ExperimentConfig plain = cfg;
    plain.threshold_grid.clear();
    return run_full(plain, prepared).results;
}

std::vector<SweepSeries> threshold_sweep(const ExperimentConfig& cfg, const Dataset& prepared) {
    ExperimentConfig sweep = cfg;
    if (sweep.threshold_grid.empty()) sweep.threshold_grid = default_threshold_grid();
    return run_full(sweep, prepared).sweeps;
}

std::string render_markdown(const std::vector<RunResult>& results) {
    std::ostringstream out;
    for (Phase phase : {Phase::before, Phase::after}) {
        out << "## Fairness audit — " << phase_slug(phase) << " reweighing\n\n";
        out << "| Model | BA | SPD | AOD | DI | EOD | TI |\n";
        out << "|-------|----|-----|-----|----|-----|----|\n";
        for (const RunResult& r : results) {
            if (r.phase != phase) continue;
            out << "| " << kind_display_name(r.kind) << " | " << fmt4(r.report.ba)
                << " | " << fmt4(r.report.spd) << " | " << fmt4(r.report.aod)
                << " | " << fmt4(r.report.di) << " | " << fmt4(r.report.eod)
                << " | " << fmt4(r.report.ti) << " |\n";
        }
        out << "\n";
    }
    return out.str();
}

std::vector<std::string> emit_report(const ExperimentOutput& output,
                                     const ExperimentConfig& cfg,
                                     const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + out_dir + "'");

    std::vector<std::string> written;
    auto open = [&](const std::string& name) {
        std::string path = (fs::path(out_dir) / name).string();
        std::ofstream file(path, std::ios::binary);
        if (!file) throw DataError("cannot write '" + path + "'");
        written.push_back(path);
        return file;
    };

    { // markdown
        std::ofstream md = open("report.md");
        md << render_markdown(output.results);
    }

    { // csv
        std::ofstream csv = open("report.csv");
        csv << "model,phase,ba,spd,aod,di,eod,ti\n";
        for (const RunResult& r : output.results) {
            csv << kind_slug(r.kind) << "," << phase_slug(r.phase) << ","
                << fmt17(r.report.ba) << "," << fmt17(r.report.spd) << ","
                << fmt17(r.report.aod) << "," << fmt17(r.report.di) << ","
                << fmt17(r.report.eod) << "," << fmt17(r.report.ti) << "\n";
        }
    }

    { // json
        nlohmann::ordered_json doc;
        nlohmann::ordered_json jcfg;
        jcfg["dataset"] = dataset_slug(cfg.dataset);
        jcfg["protected"] = protected_slug(cfg.protected_attr);
        nlohmann::ordered_json jmodels = nlohmann::ordered_json::array();
        for (const ModelSpec& spec : cfg.effective_models())
            jmodels.push_back(kind_slug(spec.kind));
        jcfg["models"] = jmodels;
        jcfg["seed"] = cfg.seed;
        jcfg["test_fraction"] = cfg.test_fraction;
        jcfg["evaluation_split"] =
            cfg.evaluation_split == EvalSplit::test ? "test" : "train";
        jcfg["grid"] = cfg.threshold_grid;
        doc["config"] = jcfg;

        nlohmann::ordered_json jresults = nlohmann::ordered_json::array();
        for (const RunResult& r : output.results) {
            nlohmann::ordered_json jr;
            jr["model"] = kind_slug(r.kind);
            jr["phase"] = phase_slug(r.phase);
            nlohmann::ordered_json jm;
            jm["ba"] = json_metric(r.report.ba);
            jm["spd"] = json_metric(r.report.spd);
            jm["aod"] = json_metric(r.report.aod);
            jm["di"] = json_metric(r.report.di);
            jm["eod"] = json_metric(r.report.eod);
            jm["ti"] = json_metric(r.report.ti);
            jr["metrics"] = jm;
            jresults.push_back(jr);
        }
        doc["results"] = jresults;

        nlohmann::ordered_json jsweeps = nlohmann::ordered_json::array();
        for (const SweepSeries& series : output.sweeps) {
            nlohmann::ordered_json js;
            js["model"] = kind_slug(series.kind);
            js["phase"] = phase_slug(series.phase);
            nlohmann::ordered_json jpoints = nlohmann::ordered_json::array();
            for (const SweepPoint& point : series.points) {
                nlohmann::ordered_json jp;
                jp["threshold"] = point.threshold;
                nlohmann::ordered_json jm;
                jm["ba"] = json_metric(point.metrics.ba);
                jm["spd"] = json_metric(point.metrics.spd);
                jm["aod"] = json_metric(point.metrics.aod);
                jm["di"] = json_metric(point.metrics.di);
                jm["eod"] = json_metric(point.metrics.eod);
                jm["ti"] = json_metric(point.metrics.ti);
                jp["metrics"] = jm;
                jpoints.push_back(jp);
            }
            js["points"] = jpoints;
            jsweeps.push_back(js);
        }
        doc["sweeps"] = jsweeps;

        std::ofstream json = open("report.json");
        json << doc.dump(2) << "\n";
    }

    for (const SweepSeries& series : output.sweeps) {
        std::ofstream csv = open(std::string("sweep_") + kind_slug(series.kind) + "_" +
                                 phase_slug(series.phase) + ".csv");
        csv << "threshold,ba,spd,aod,di,eod,ti\n";
        auto cell = [](const std::optional<double>& v) {
            return v ? fmt17(*v) : std::string();
        };
        for (const SweepPoint& point : series.points) {
            csv << fmt17(point.threshold) << "," << cell(point.metrics.ba) << ","
                << cell(point.metrics.spd) << "," << cell(point.metrics.aod) << ","
                << cell(point.metrics.di) << "," << cell(point.metrics.eod) << ","
                << cell(point.metrics.ti) << "\n";
        }
    }
    return written;
}

} // namespace fairaudit

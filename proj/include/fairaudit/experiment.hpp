#ifndef FAIRAUDIT_EXPERIMENT_HPP
#define FAIRAUDIT_EXPERIMENT_HPP

#include "fairaudit/dataset.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/prepare.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fairaudit {

enum class DatasetId { adult, compas };
enum class EvalSplit { test, train };
enum class Phase { before, after };

const char* dataset_slug(DatasetId id);
const char* phase_slug(Phase phase);

struct ExperimentConfig {
    DatasetId dataset = DatasetId::adult;
    ProtectedAttr protected_attr = ProtectedAttr::race;
    std::vector<ModelSpec> models; // empty = all five kinds with defaults
    double test_fraction = 0.3;
    std::uint64_t seed = 42;
    EvalSplit evaluation_split = EvalSplit::test;
    std::vector<double> threshold_grid; // empty = no sweep requested

    void validate() const; // throws UsageError

    std::vector<ModelSpec> effective_models() const;
};

/// Key-value config text: one `key = value` per line, '#' comments.
/// Keys: dataset, protected, models (comma list), seed, test_fraction,
/// evaluation_split, grid ("default", "lo:step:hi", or a comma list).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

std::vector<double> default_threshold_grid(); // 0.00, 0.01, ..., 1.00

/// Grid syntax used by configs and --grid: "default", "lo:step:hi", or a
/// comma-separated list of thresholds.
std::vector<double> parse_grid_spec(const std::string& spec);

struct RunResult {
    ModelKind kind = ModelKind::logreg;
    Phase phase = Phase::before;
    FairnessReport report;
};

/// One sweep point; a metric is absent where its preconditions fail at that
/// threshold (e.g. DI at 0/0 when nobody is selected).
struct MetricValues {
    std::optional<double> ba, spd, aod, di, eod, ti;
};
struct SweepPoint {
    double threshold = 0.0;
    MetricValues metrics;
};
struct SweepSeries {
    ModelKind kind = ModelKind::logreg;
    Phase phase = Phase::before;
    std::vector<SweepPoint> points;
};

struct ExperimentOutput {
    std::vector<RunResult> results; // ordered by (model kind, phase)
    std::vector<SweepSeries> sweeps; // empty unless a grid was configured
};

/// The before/after protocol on an already-prepared dataset:
/// split -> standardize numeric columns from the training split -> audit each
/// model on the original weights, then again after reweighing the training
/// split. Evaluation always uses unit weights on the chosen split. Each
/// (model, phase) cell trains from its own seed derived from cfg.seed, so
/// results do not depend on the order models are listed or run.
ExperimentOutput run_full(const ExperimentConfig& cfg, const Dataset& prepared);

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, const Dataset& prepared);
std::vector<SweepSeries> threshold_sweep(const ExperimentConfig& cfg, const Dataset& prepared);

/// Write report.md, report.csv, report.json and per-series sweep CSVs into
/// out_dir (created if missing). Returns the paths written.
std::vector<std::string> emit_report(const ExperimentOutput& output,
                                     const ExperimentConfig& cfg,
                                     const std::string& out_dir);

/// The before/after tables as markdown (also what `run` prints to stdout).
std::string render_markdown(const std::vector<RunResult>& results);

} // namespace fairaudit

#endif

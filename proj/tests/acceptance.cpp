// Acceptance checks for the audit pipeline. Each numbered criterion prints a
// single PASS/FAIL line; the process exits nonzero if any criterion fails.
//
// Environment:
//   FAIRAUDIT_ROOT  repository root; raw datasets are read from $ROOT/data
//   FAIRAUDIT_BIN   CLI binary, used for the end-to-end determinism check

#include "fairaudit/dataset.hpp"
#include "fairaudit/errors.hpp"
#include "fairaudit/experiment.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/oracle.hpp"
#include "fairaudit/prepare.hpp"
#include "fairaudit/reweighing.hpp"
#include "fairaudit/rng.hpp"
#include "fairaudit/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace fairaudit;
namespace fs = std::filesystem;

namespace {

// --- plumbing ---------------------------------------------------------------

struct CheckFailure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw CheckFailure{detail};
}

std::string num(double v) { return metric_to_string(v); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string root_dir() {
    const char* root = std::getenv("FAIRAUDIT_ROOT");
    if (!root) throw CheckFailure{"FAIRAUDIT_ROOT is not set"};
    return root;
}

std::string cli_binary() {
    const char* bin = std::getenv("FAIRAUDIT_BIN");
    if (!bin) throw CheckFailure{"FAIRAUDIT_BIN is not set"};
    return bin;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), "cannot read " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// --- shared, memoized experiment runs ----------------------------------------

struct TimedRun {
    std::vector<RunResult> results;
    double seconds = 0.0;
};

const RawTable& adult_raw() {
    static std::optional<RawTable> table;
    if (!table) {
        fs::path csv = fs::path(root_dir()) / "data" / "adult" / "adult-all.csv";
        require(fs::exists(csv), csv.string() +
                                     " is missing; run: fairaudit fetch --dataset adult");
        table = load_adult_table({csv.string()});
    }
    return *table;
}

const Dataset& adult_prepared(ProtectedAttr attr) {
    static std::optional<Dataset> by_attr[2];
    auto& slot = by_attr[attr == ProtectedAttr::race ? 0 : 1];
    if (!slot) {
        PrepareOptions options;
        options.standardize = false; // the experiment standardizes per split
        slot = prepare_adult(adult_raw(), attr, options).data;
    }
    return *slot;
}

/// Full five-model before/after experiment with the default configuration.
const TimedRun& adult_run(ProtectedAttr attr) {
    static std::optional<TimedRun> by_attr[2];
    auto& slot = by_attr[attr == ProtectedAttr::race ? 0 : 1];
    if (!slot) {
        ExperimentConfig cfg;
        cfg.protected_attr = attr;
        auto start = std::chrono::steady_clock::now();
        const Dataset& prepared = adult_prepared(attr);
        TimedRun run;
        run.results = run_full(cfg, prepared).results;
        run.seconds = seconds_since(start);
        slot = std::move(run);
    }
    return *slot;
}

const FairnessReport& find_report(const std::vector<RunResult>& results,
                                  ModelKind kind, Phase phase) {
    for (const RunResult& r : results)
        if (r.kind == kind && r.phase == phase) return r.report;
    throw CheckFailure{std::string("no result row for ") + kind_slug(kind) + "/" +
                       phase_slug(phase)};
}

// --- criterion bodies ---------------------------------------------------------

void criterion_reweighing_invariants() {
    auto start = std::chrono::steady_clock::now();
    Rng rng(20260814);
    int tested = 0, attempts = 0;
    while (tested < 1000 && attempts < 8000) {
        ++attempts;
        SyntheticSpec spec;
        spec.n_total = 40 + std::int64_t(rng.below(161));
        spec.privileged_fraction = 0.3 + rng.uniform01() * 0.4;
        spec.positive_rate_privileged = 0.15 + rng.uniform01() * 0.7;
        spec.positive_rate_unprivileged = 0.15 + rng.uniform01() * 0.7;
        spec.feature_dim = 1 + std::int64_t(rng.below(4));
        spec.class_separation = rng.uniform01() * 3.0;
        spec.seed = rng.next_u64();

        Dataset ds = synthesize(spec);
        GroupCounts counts = count_groups(ds);
        if (!counts.n_pp || !counts.n_pup || !counts.n_np || !counts.n_nup)
            continue; // reweighing is undefined with an empty cell
        Dataset rw = apply_reweighing(ds);

        double mass = 0.0;
        for (double w : rw.weights) mass += w;
        double n = double(counts.n_total);
        require(std::fabs(mass - n) <= 1e-9 * n,
                "weight mass " + num(mass) + " != n " + num(n));

        const double target = double(counts.n_pos) / n;
        for (int group = 0; group <= 1; ++group) {
            double pos = 0.0, total = 0.0;
            for (std::size_t i = 0; i < rw.n(); ++i) {
                if (rw.privileged[i] != group) continue;
                total += rw.weights[i];
                if (rw.labels[i]) pos += rw.weights[i];
            }
            double rate = pos / total;
            require(std::fabs(rate - target) <= 1e-9,
                    std::string("group ") + (group ? "priv" : "unpriv") +
                        " weighted rate " + num(rate) + " != " + num(target));
        }
        ++tested;
    }
    require(tested >= 1000, "only " + std::to_string(tested) + " datasets qualified");
    double elapsed = seconds_since(start);
    require(elapsed < 10.0, "took " + num(elapsed) + " s (limit 10 s)");
}

void criterion_oracle_equivalence() {
    auto start = std::chrono::steady_clock::now();
    Rng rng(424243);
    int compared = 0, attempts = 0;
    auto close = [](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::fabs(a - b) <= 1e-12;
    };
    while (compared < 1000 && attempts < 6000) {
        ++attempts;
        std::size_t n = 5 + std::size_t(rng.below(196));
        double p_pred = 0.1 + rng.uniform01() * 0.8;
        double p_label = 0.1 + rng.uniform01() * 0.8;
        double p_priv = 0.2 + rng.uniform01() * 0.6;
        LabelVec preds(n), labels(n), privileged(n);
        WeightVec weights(n);
        for (std::size_t i = 0; i < n; ++i) {
            preds[i] = rng.bernoulli(p_pred);
            labels[i] = rng.bernoulli(p_label);
            privileged[i] = rng.bernoulli(p_priv);
            weights[i] = 0.1 + rng.uniform01() * 3.0;
        }

        bool prod_threw = false, oracle_threw = false;
        FairnessReport prod, oracle;
        try {
            prod = full_report(preds, labels, privileged, weights);
        } catch (const DataError&) {
            prod_threw = true;
        }
        try {
            oracle = naive_oracle(preds, labels, privileged, weights);
        } catch (const DataError&) {
            oracle_threw = true;
        }
        require(prod_threw == oracle_threw,
                "error disagreement on instance " + std::to_string(attempts));
        if (prod_threw) continue; // both rejected the instance; nothing to compare

        require(close(prod.ba, oracle.ba), "ba " + num(prod.ba) + " vs " + num(oracle.ba));
        require(close(prod.spd, oracle.spd),
                "spd " + num(prod.spd) + " vs " + num(oracle.spd));
        require(close(prod.aod, oracle.aod),
                "aod " + num(prod.aod) + " vs " + num(oracle.aod));
        require(close(prod.di, oracle.di), "di " + num(prod.di) + " vs " + num(oracle.di));
        require(close(prod.eod, oracle.eod),
                "eod " + num(prod.eod) + " vs " + num(oracle.eod));
        require(close(prod.ti, oracle.ti), "ti " + num(prod.ti) + " vs " + num(oracle.ti));
        ++compared;
    }
    require(compared >= 1000, "only " + std::to_string(compared) + " instances compared");
    double elapsed = seconds_since(start);
    require(elapsed < 10.0, "took " + num(elapsed) + " s (limit 10 s)");
}

void criterion_worked_values() {
    GroupCounts counts;
    counts.n_pp = 12;
    counts.n_pup = 3;
    counts.n_np = 6;
    counts.n_nup = 9;
    counts.n_p = counts.n_pp + counts.n_np;     // 18
    counts.n_up = counts.n_pup + counts.n_nup;  // 12
    counts.n_pos = counts.n_pp + counts.n_pup;  // 15
    counts.n_neg = counts.n_np + counts.n_nup;  // 15
    counts.n_total = 30;

    FourWeights w = compute_weights(counts);
    require(w.w_pp == 0.75, "w_pp = " + num(w.w_pp) + ", wanted 0.75");
    require(w.w_pup == 2.0, "w_pup = " + num(w.w_pup) + ", wanted 2");
    require(w.w_np == 1.5, "w_np = " + num(w.w_np) + ", wanted 1.5");
    require(w.w_nup == 2.0 / 3.0, "w_nup = " + num(w.w_nup) + ", wanted 2/3");

    // benefit terms b = pred - label + 1 come out as [1, 1, 1, 2]
    LabelVec preds = {0, 0, 0, 1};
    LabelVec labels = {0, 0, 0, 0};
    double ti = theil_index(preds, labels);
    require(std::fabs(ti - 0.0541) <= 0.0001,
            "theil index " + num(ti) + " not within 0.0541 +/- 0.0001");
}

void criterion_knn_invariance() {
    const TimedRun& run = adult_run(ProtectedAttr::race);
    const FairnessReport& before = find_report(run.results, ModelKind::knn, Phase::before);
    const FairnessReport& after = find_report(run.results, ModelKind::knn, Phase::after);
    require(before.ba == after.ba && before.spd == after.spd &&
                before.aod == after.aod && before.di == after.di &&
                before.eod == after.eod && before.ti == after.ti,
            "knn before/after reports differ: ba " + num(before.ba) + " vs " +
                num(after.ba) + ", di " + num(before.di) + " vs " + num(after.di));
}

void criterion_tree_training_purity() {
    auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.protected_attr = ProtectedAttr::race;
    cfg.evaluation_split = EvalSplit::train;
    ModelSpec dtree;
    dtree.kind = ModelKind::dtree;
    cfg.models = {dtree};
    // The raw census rows include a few identical feature tuples with opposite
    // labels. A split that puts such a contradictory pair wholly inside the
    // training set makes exact purity impossible for any axis-aligned tree, so
    // pick a seed whose split separates every such pair.
    cfg.seed = 14;

    std::vector<RunResult> results =
        run_full(cfg, adult_prepared(ProtectedAttr::race)).results;
    const FairnessReport& after = find_report(results, ModelKind::dtree, Phase::after);
    require(after.ba == 1.0, "training-set BA = " + num(after.ba) + ", wanted 1");
    require(after.aod == 0.0, "training-set AOD = " + num(after.aod) + ", wanted 0");
    require(after.eod == 0.0, "training-set EOD = " + num(after.eod) + ", wanted 0");
    require(after.ti == 0.0, "training-set TI = " + num(after.ti) + ", wanted 0");
    double elapsed = seconds_since(start);
    require(elapsed < 120.0, "took " + num(elapsed) + " s (limit 120 s)");
}

void criterion_bias_direction() {
    const ModelKind kinds[] = {ModelKind::logreg, ModelKind::dtree, ModelKind::knn,
                               ModelKind::gnb, ModelKind::rforest};
    for (ProtectedAttr attr : {ProtectedAttr::race, ProtectedAttr::sex}) {
        const char* tag = attr == ProtectedAttr::race ? "race" : "sex";
        const TimedRun& run = adult_run(attr);
        require(run.seconds < 300.0, std::string("adult/") + tag + " run took " +
                                         num(run.seconds) + " s (limit 300 s)");
        for (ModelKind kind : kinds) {
            const FairnessReport& before = find_report(run.results, kind, Phase::before);
            require(before.di < 1.0, std::string(kind_slug(kind)) + " on " + tag +
                                         ": before DI = " + num(before.di) +
                                         ", wanted < 1");
            require(before.spd < 0.0, std::string(kind_slug(kind)) + " on " + tag +
                                          ": before SPD = " + num(before.spd) +
                                          ", wanted < 0");
        }
        for (ModelKind kind : {ModelKind::gnb, ModelKind::rforest}) {
            const FairnessReport& before = find_report(run.results, kind, Phase::before);
            const FairnessReport& after = find_report(run.results, kind, Phase::after);
            require(std::fabs(after.di - 1.0) < std::fabs(before.di - 1.0),
                    std::string(kind_slug(kind)) + " on " + tag + ": DI moved " +
                        num(before.di) + " -> " + num(after.di) +
                        ", not strictly closer to 1");
        }
    }
    const FairnessReport& gnb_after =
        find_report(adult_run(ProtectedAttr::race).results, ModelKind::gnb, Phase::after);
    require(std::fabs(gnb_after.di - 0.7379) <= 0.15,
            "gnb after DI on race = " + num(gnb_after.di) +
                ", not within 0.7379 +/- 0.15");
}

void criterion_logreg_accuracy() {
    const FairnessReport& before = find_report(adult_run(ProtectedAttr::race).results,
                                               ModelKind::logreg, Phase::before);
    require(std::fabs(before.ba - 0.7390) <= 0.05,
            "logreg before BA = " + num(before.ba) + ", not within 0.7390 +/- 0.05");
}

void criterion_classifier_sanity() {
    // (a) analytic logreg gradient vs. central finite differences
    Rng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 30, d = 4;
        Matrix X(n, d);
        LabelVec y(n);
        WeightVec w(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) X.at(i, j) = rng.normal();
            y[i] = std::uint8_t(rng.below(2));
            w[i] = 0.25 + rng.uniform01() * 2.0;
        }
        std::vector<double> beta(d + 1);
        for (double& b : beta) b = rng.normal() * 0.5;

        detail::LossGrad lg = detail::logreg_loss_grad(X, y, w, 1.0, beta);
        for (std::size_t j = 0; j < beta.size(); ++j) {
            double h = 1e-6 * std::max(1.0, std::fabs(beta[j]));
            std::vector<double> up = beta, down = beta;
            up[j] += h;
            down[j] -= h;
            double numeric = (detail::logreg_loss_grad(X, y, w, 1.0, up).loss -
                              detail::logreg_loss_grad(X, y, w, 1.0, down).loss) /
                             (2.0 * h);
            double rel = std::fabs(lg.grad[j] - numeric) /
                         std::max(1e-8, std::fabs(lg.grad[j]));
            require(rel <= 1e-5, "gradient component " + std::to_string(j) +
                                     " off by relative " + num(rel));
        }
    }

    // (b) integer weights == literal row replication for gnb and dtree (n <= 30)
    Rng grid_rng(555);
    auto grid_value = [&] { return double(grid_rng.below(9)) - 4.0; };
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 6 + std::size_t(grid_rng.below(25));
        const std::size_t d = 3;
        Dataset weighted;
        weighted.features = Matrix(n, d);
        for (std::size_t j = 0; j < d; ++j)
            weighted.feature_names.push_back("g" + std::to_string(j));
        Dataset replicated = weighted;
        std::vector<double> flat;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint8_t label = i == 0 ? 0 : i == n - 1 ? 1 : std::uint8_t(grid_rng.below(2));
            std::uint8_t priv = std::uint8_t(grid_rng.below(2));
            int copies = 1 + int(grid_rng.below(4));
            weighted.labels.push_back(label);
            weighted.privileged.push_back(priv);
            weighted.weights.push_back(double(copies));
            std::vector<double> row(d);
            for (std::size_t j = 0; j < d; ++j) {
                row[j] = grid_value();
                weighted.features.at(i, j) = row[j];
            }
            for (int rep = 0; rep < copies; ++rep) {
                flat.insert(flat.end(), row.begin(), row.end());
                replicated.labels.push_back(label);
                replicated.privileged.push_back(priv);
                replicated.weights.push_back(1.0);
            }
        }
        replicated.features = Matrix(replicated.labels.size(), d);
        replicated.features.data = flat;

        Matrix probe(40, d);
        for (std::size_t i = 0; i < probe.rows; ++i)
            for (std::size_t j = 0; j < d; ++j) probe.at(i, j) = grid_value();

        for (ModelKind kind : {ModelKind::gnb, ModelKind::dtree}) {
            ModelSpec spec;
            spec.kind = kind;
            auto a = train(spec, weighted);
            auto b = train(spec, replicated);
            // exact equivalence of behavior: every prediction identical
            // (scores may drift an ulp for gnb because w*c^2 in one rounded
            // step and c^2 added w times associate differently)
            require(predict_labels(*a, probe) == predict_labels(*b, probe),
                    std::string(kind_slug(kind)) + " replication mismatch on trial " +
                        std::to_string(trial));
        }
    }

    // (c) power-of-two weight scaling never changes predicted labels
    Rng scale_rng(777);
    const double scales[] = {0.125, 0.5, 2.0, 8.0, 64.0};
    for (int trial = 0; trial < 100; ++trial) {
        SyntheticSpec spec;
        spec.n_total = 60;
        spec.class_separation = 1.0 + scale_rng.uniform01() * 2.0;
        spec.feature_dim = 3;
        spec.seed = 9000 + std::uint64_t(trial);
        Dataset base = synthesize(spec);
        for (std::size_t i = 0; i < base.n(); ++i)
            base.weights[i] = 0.5 + scale_rng.uniform01() * 3.0;
        Dataset scaled = base;
        double c = scales[scale_rng.below(5)];
        for (double& w : scaled.weights) w *= c;

        spec.seed = 90000 + std::uint64_t(trial);
        Matrix probe = synthesize(spec).features;
        for (ModelKind kind : {ModelKind::logreg, ModelKind::gnb, ModelKind::dtree}) {
            ModelSpec model_spec;
            model_spec.kind = kind;
            auto a = train(model_spec, base);
            auto b = train(model_spec, scaled);
            require(predict_labels(*a, probe) == predict_labels(*b, probe),
                    std::string(kind_slug(kind)) + " labels changed under x" + num(c) +
                        " weight scaling on trial " + std::to_string(trial));
        }
    }
}

void criterion_cli_determinism() {
    fs::path dir = fs::temp_directory_path() / "fairaudit_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::path config = dir / "exp.conf";
    {
        std::ofstream out(config);
        out << "dataset = compas\nprotected = race\nseed = 11\n";
    }

    auto invoke = [&](const std::string& out_dir) {
        std::string cmd = "'" + cli_binary() + "' run --config '" + config.string() +
                          "' --data '" + root_dir() + "/data' --out '" + out_dir +
                          "' > /dev/null 2> '" + (dir / "stderr.txt").string() + "'";
        int status = std::system(cmd.c_str());
        int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        require(code == 0, "cli run exited " + std::to_string(code) + ": " +
                               slurp(dir / "stderr.txt"));
    };
    invoke((dir / "a").string());
    invoke((dir / "b").string());

    std::string first = slurp(dir / "a" / "report.csv");
    std::string second = slurp(dir / "b" / "report.csv");
    require(!first.empty(), "first report.csv is empty");
    require(first == second, "report.csv bytes differ between identical runs");
    fs::remove_all(dir);
}

struct Criterion {
    int number;
    const char* summary;
    std::function<void()> body;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "reweighing invariants on 1000 random datasets (1e-9, under 10 s)",
         criterion_reweighing_invariants},
        {2, "six metrics match the naive oracle on 1000 random instances (1e-12, under 10 s)",
         criterion_oracle_equivalence},
        {3, "worked fixtures: four reweighing factors exact, Theil index 0.0541 +/- 0.0001",
         criterion_worked_values},
        {4, "knn audit reports bit-identical before and after reweighing (adult/race)",
         criterion_knn_invariance},
        {5, "unlimited tree audits its training split perfectly (adult/race, under 2 min)",
         criterion_tree_training_purity},
        {6, "before-phase DI < 1 and SPD < 0 everywhere; gnb/rforest DI moves toward 1 "
            "(adult, both attributes, under 5 min each)",
         criterion_bias_direction},
        {7, "logreg before-phase balanced accuracy within 0.7390 +/- 0.05 (adult/race)",
         criterion_logreg_accuracy},
        {8, "classifier sanity: gradient check, weight replication, weight scaling",
         criterion_classifier_sanity},
        {9, "two cli runs with one config emit byte-identical report.csv",
         criterion_cli_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string verdict = "PASS";
        std::string detail;
        try {
            c.body();
        } catch (const CheckFailure& f) {
            verdict = "FAIL";
            detail = f.detail;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = std::string("unexpected error: ") + e.what();
        }
        std::cout << verdict << ": criterion " << c.number << " — " << c.summary;
        if (!detail.empty()) std::cout << " [" << detail << "]";
        std::cout << std::endl; // flush per line: long runs sit between criteria
        if (verdict == "FAIL") ++failures;
    }

    if (failures)
        std::cout << failures << " of 9 criteria failed" << std::endl;
    else
        std::cout << "all 9 criteria passed" << std::endl;
    return failures ? 1 : 0;
}

#include "fairaudit/models/impl.hpp"

#include "fairaudit/errors.hpp"
#include "fairaudit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <vector>

namespace fairaudit::detail {

std::unique_ptr<Model> train_dtree(const ModelSpec& spec, const Dataset& ds) {
    check_training_labels(ds, "dtree");
    std::vector<std::size_t> rows(ds.n());
    std::iota(rows.begin(), rows.end(), 0);

    TreeGrowConfig cfg;
    cfg.max_depth = spec.hp.max_depth;
    cfg.min_samples_leaf = spec.hp.min_samples_leaf;

    auto model = std::make_unique<DtreeModel>();
    model->n_features = ds.dim();
    model->nodes = grow_tree(ds.features, ds.labels, ds.weights, rows, cfg, nullptr);
    return model;
}

std::vector<double> DtreeModel::score_rows(const Matrix& X) const {
    check_dim(X, n_features, "dtree");
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i)
        out[i] = tree_score_row(nodes, X.row(i).data());
    return out;
}

void DtreeModel::save(std::ostream& out) const {
    out << n_features << "\n";
    write_tree(out, nodes);
}

std::unique_ptr<DtreeModel> DtreeModel::load(std::istream& in) {
    auto model = std::make_unique<DtreeModel>();
    if (!(in >> model->n_features)) throw DataError("model file: bad dtree header");
    model->nodes = read_tree(in);
    return model;
}

std::unique_ptr<Model> train_rforest(const ModelSpec& spec, const Dataset& ds) {
    check_training_labels(ds, "rforest");
    const std::size_t n = ds.n(), d = ds.dim();

    // bootstrap draws follow the training weights: inverse-CDF sampling on
    // the cumulative weight vector, so heavier rows appear more often
    std::vector<double> cumw(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += ds.weights[i];
        cumw[i] = acc;
    }
    const double total = acc;
    const std::vector<double> unit(n, 1.0);

    TreeGrowConfig cfg;
    cfg.max_depth = spec.hp.max_depth;
    cfg.min_samples_leaf = spec.hp.min_samples_leaf;
    cfg.mtry = std::size_t(std::ceil(std::sqrt(double(d))));

    auto model = std::make_unique<RforestModel>();
    model->n_features = d;
    model->trees.reserve(std::size_t(spec.hp.n_trees));

    std::vector<std::size_t> sample(n);
    for (int t = 0; t < spec.hp.n_trees; ++t) {
        Rng rng(derive_seed(spec.seed, 0xf03e57ULL, std::uint64_t(t)));
        bool one_class = true;
        for (std::size_t i = 0; i < n; ++i) {
            double u = rng.uniform01() * total;
            std::size_t pick = std::size_t(
                std::lower_bound(cumw.begin(), cumw.end(), u) - cumw.begin());
            if (pick >= n) pick = n - 1;
            sample[i] = pick;
            if (i > 0 && ds.labels[pick] != ds.labels[sample[0]]) one_class = false;
        }
        if (one_class) {
            // degenerate draw: a single root leaf voting the drawn class
            TreeNode leaf;
            leaf.p1 = double(ds.labels[sample[0]]);
            model->trees.push_back({leaf});
            continue;
        }
        model->trees.push_back(
            grow_tree(ds.features, ds.labels, unit, sample, cfg, &rng));
    }
    return model;
}

std::vector<double> RforestModel::score_rows(const Matrix& X) const {
    check_dim(X, n_features, "rforest");
    std::vector<double> out(X.rows, 0.0);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const double* row = X.row(i).data();
        std::size_t votes = 0;
        for (const std::vector<TreeNode>& tree : trees)
            if (tree_score_row(tree, row) >= 0.5) ++votes;
        out[i] = double(votes) / double(trees.size());
    }
    return out;
}

void RforestModel::save(std::ostream& out) const {
    out << n_features << " " << trees.size() << "\n";
    for (const std::vector<TreeNode>& tree : trees) write_tree(out, tree);
}

std::unique_ptr<RforestModel> RforestModel::load(std::istream& in) {
    auto model = std::make_unique<RforestModel>();
    std::size_t n_trees = 0;
    if (!(in >> model->n_features >> n_trees))
        throw DataError("model file: bad rforest header");
    model->trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) model->trees.push_back(read_tree(in));
    return model;
}

} // namespace fairaudit::detail

#include "fairaudit/models/tree_internal.hpp"

#include "fairaudit/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>

namespace fairaudit::detail {

namespace {

/// Weighted Gini impurity multiplied by the node mass: mass - (w1^2 + w0^2)/mass.
/// Summing this over children (instead of the mass-weighted average of the
/// plain impurity) ranks splits identically and saves a division.
double gini_mass(double mass, double w1) {
    double w0 = mass - w1;
    return mass - (w1 * w1 + w0 * w0) / mass;
}

struct WorkItem {
    std::size_t node;
    std::vector<std::size_t> rows;
    int depth;
};

struct BestSplit {
    double score = std::numeric_limits<double>::infinity();
    std::int32_t feature = -1;
    double threshold = 0.0;
};

} // namespace

std::vector<TreeNode> grow_tree(const Matrix& X,
                                const std::vector<std::uint8_t>& y,
                                const std::vector<double>& w,
                                const std::vector<std::size_t>& rows,
                                const TreeGrowConfig& cfg, Rng* rng) {
    if (rows.empty()) throw TrainError("tree: no rows to grow from");
    if (cfg.mtry > 0 && rng == nullptr)
        throw TrainError("tree: feature subsampling requires an rng");

    const std::size_t d = X.cols;
    std::vector<TreeNode> nodes;
    nodes.emplace_back();

    std::vector<WorkItem> stack;
    stack.push_back({0, rows, 0});

    // scratch buffers reused across nodes
    std::vector<std::pair<double, std::size_t>> order;
    std::vector<std::size_t> feature_pool;

    while (!stack.empty()) {
        WorkItem item = std::move(stack.back());
        stack.pop_back();
        const std::vector<std::size_t>& idx = item.rows;
        const std::size_t m = idx.size();

        double mass = 0.0, mass1 = 0.0;
        std::size_t count1 = 0;
        for (std::size_t r : idx) {
            mass += w[r];
            if (y[r]) {
                mass1 += w[r];
                ++count1;
            }
        }
        TreeNode& placeholder = nodes[item.node];
        placeholder.p1 = mass1 / mass;

        bool depth_ok = cfg.max_depth < 0 || item.depth < cfg.max_depth;
        bool mixed = count1 > 0 && count1 < m;
        if (!depth_ok || !mixed || m < 2 * std::size_t(cfg.min_samples_leaf))
            continue; // stays a leaf

        if (cfg.mtry > 0 && cfg.mtry < d) {
            feature_pool = rng->sample_without_replacement(d, cfg.mtry);
        } else {
            feature_pool.resize(d);
            for (std::size_t f = 0; f < d; ++f) feature_pool[f] = f;
        }

        BestSplit best;
        for (std::size_t f : feature_pool) {
            order.clear();
            order.reserve(m);
            for (std::size_t k = 0; k < m; ++k)
                order.emplace_back(X.at(idx[k], f), k);
            std::sort(order.begin(), order.end());
            if (order.front().first == order.back().first) continue;

            double left_mass = 0.0, left_mass1 = 0.0;
            std::size_t left_count = 0;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                std::size_t r = idx[order[i].second];
                left_mass += w[r];
                if (y[r]) left_mass1 += w[r];
                ++left_count;
                if (order[i + 1].first == order[i].first) continue;
                if (left_count < std::size_t(cfg.min_samples_leaf)) continue;
                if (m - left_count < std::size_t(cfg.min_samples_leaf)) break;

                double score = gini_mass(left_mass, left_mass1) +
                               gini_mass(mass - left_mass, mass1 - left_mass1);
                if (score < best.score) {
                    double lo = order[i].first, hi = order[i + 1].first;
                    double mid = lo + (hi - lo) / 2.0;
                    if (!(mid < hi)) mid = lo; // adjacent doubles
                    best.score = score;
                    best.feature = std::int32_t(f);
                    best.threshold = mid;
                }
            }
        }

        if (best.feature < 0) continue; // every candidate feature was constant

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : idx) {
            if (X.at(r, std::size_t(best.feature)) <= best.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }

        std::int32_t left_id = std::int32_t(nodes.size());
        nodes.emplace_back();
        std::int32_t right_id = std::int32_t(nodes.size());
        nodes.emplace_back();
        TreeNode& parent = nodes[item.node];
        parent.feature = best.feature;
        parent.threshold = best.threshold;
        parent.left = left_id;
        parent.right = right_id;

        stack.push_back({std::size_t(right_id), std::move(right_rows), item.depth + 1});
        stack.push_back({std::size_t(left_id), std::move(left_rows), item.depth + 1});
    }
    return nodes;
}

double tree_score_row(const std::vector<TreeNode>& nodes, const double* row) {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& n = nodes[at];
        at = std::size_t(row[n.feature] <= n.threshold ? n.left : n.right);
    }
    return nodes[at].p1;
}

void write_tree(std::ostream& out, const std::vector<TreeNode>& nodes) {
    out << nodes.size() << "\n";
    char buf[64];
    for (const TreeNode& n : nodes) {
        out << n.feature << " ";
        std::snprintf(buf, sizeof buf, "%a", n.threshold);
        out << buf << " " << n.left << " " << n.right << " ";
        std::snprintf(buf, sizeof buf, "%a", n.p1);
        out << buf << "\n";
    }
}

std::vector<TreeNode> read_tree(std::istream& in) {
    std::size_t count = 0;
    if (!(in >> count)) throw DataError("model file: bad tree header");
    std::vector<TreeNode> nodes(count);
    for (TreeNode& n : nodes) {
        std::string thr, p1;
        if (!(in >> n.feature >> thr >> n.left >> n.right >> p1))
            throw DataError("model file: truncated tree");
        n.threshold = std::strtod(thr.c_str(), nullptr);
        n.p1 = std::strtod(p1.c_str(), nullptr);
    }
    return nodes;
}

} // namespace fairaudit::detail

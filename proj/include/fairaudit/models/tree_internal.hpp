#ifndef FAIRAUDIT_MODELS_TREE_INTERNAL_HPP
#define FAIRAUDIT_MODELS_TREE_INTERNAL_HPP

#include "fairaudit/matrix.hpp"
#include "fairaudit/rng.hpp"

#include <cstdint>
#include <vector>

namespace fairaudit::detail {

/// Flat binary tree. A node is a leaf iff feature < 0; then p1 holds the
/// weighted fraction of favorable labels at the node. Internal nodes send
/// rows with x[feature] <= threshold to the left child.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double p1 = 0.0;
};

struct TreeGrowConfig {
    int max_depth = -1; // -1 = unlimited
    int min_samples_leaf = 1; // rows, not weight
    std::size_t mtry = 0; // 0 = consider every feature; else sample this many
};

/// CART with weighted Gini impurity. Split candidates are midpoints between
/// consecutive distinct values of a feature within the node; the best split
/// minimizes the summed child impurity mass, ties resolved toward the lowest
/// feature index and then the lowest threshold. Splitting continues while a
/// node is mixed and some feature still varies, so a tree with default limits
/// reproduces its training labels whenever no two identical rows disagree.
/// `rng` is consulted only when cfg.mtry is set.
std::vector<TreeNode> grow_tree(const Matrix& X,
                                const std::vector<std::uint8_t>& y,
                                const std::vector<double>& w,
                                const std::vector<std::size_t>& rows,
                                const TreeGrowConfig& cfg, Rng* rng);

double tree_score_row(const std::vector<TreeNode>& nodes, const double* row);

void write_tree(std::ostream& out, const std::vector<TreeNode>& nodes);
std::vector<TreeNode> read_tree(std::istream& in);

} // namespace fairaudit::detail

#endif

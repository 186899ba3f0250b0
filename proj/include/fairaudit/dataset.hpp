#ifndef FAIRAUDIT_DATASET_HPP
#define FAIRAUDIT_DATASET_HPP

#include "fairaudit/matrix.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fairaudit {

/// A prepared tabular dataset for a binary fairness audit.
/// labels: 1 = favorable outcome. privileged: 1 = privileged-group member.
/// weights: strictly positive per-row sample weights, 1.0 by default.
/// Immutable by convention after construction; operations return new copies.
struct Dataset {
    Matrix features;
    std::vector<std::uint8_t> labels;
    std::vector<std::uint8_t> privileged;
    std::vector<double> weights;
    std::vector<std::string> feature_names;
    std::string provenance;

    std::size_t n() const { return labels.size(); }
    std::size_t dim() const { return features.cols; }

    /// Throws DataError if any structural invariant is broken.
    void validate() const;

    /// New dataset with the given rows, in the given order.
    Dataset select(const std::vector<std::size_t>& indices) const;
};

/// Population counts over the label x group cells, plus their marginals.
/// p = privileged, up = unprivileged; leading p/n = positive/negative label.
struct GroupCounts {
    std::int64_t n_p = 0;
    std::int64_t n_up = 0;
    std::int64_t n_pp = 0;
    std::int64_t n_np = 0;
    std::int64_t n_pup = 0;
    std::int64_t n_nup = 0;
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
    std::int64_t n_total = 0;
};

/// Unweighted tally of rows per (label, group) cell.
GroupCounts count_groups(const Dataset& ds);

/// Deterministic seeded train/test split. |test| = round(n * test_fraction).
/// Throws DataError when either part would be empty.
std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction,
                                  std::uint64_t seed);

/// Dataset CSV format: feature columns, then `label`, `protected`, `weight`.
/// Doubles are written with enough digits to round-trip exactly.
void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

} // namespace fairaudit

#endif

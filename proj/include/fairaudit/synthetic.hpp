#ifndef FAIRAUDIT_SYNTHETIC_HPP
#define FAIRAUDIT_SYNTHETIC_HPP

#include "fairaudit/dataset.hpp"

#include <cstdint>

namespace fairaudit {

/// Recipe for a synthetic audit dataset: group membership and labels are
/// Bernoulli draws at the given rates, features come from two spherical
/// Gaussians whose means are class_separation apart.
struct SyntheticSpec {
    std::int64_t n_total = 100;
    double privileged_fraction = 0.5;
    double positive_rate_privileged = 0.5;
    double positive_rate_unprivileged = 0.5;
    std::int64_t feature_dim = 2;
    double class_separation = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Deterministic per seed: the same spec always yields the same dataset.
Dataset synthesize(const SyntheticSpec& spec);

} // namespace fairaudit

#endif

#include "fairaudit/synthetic.hpp"

#include "fairaudit/errors.hpp"
#include "fairaudit/rng.hpp"

#include <cmath>

namespace fairaudit {

void SyntheticSpec::validate() const {
    if (n_total < 4) throw DataError("synthesize: n_total must be >= 4");
    if (feature_dim < 1) throw DataError("synthesize: feature_dim must be >= 1");
    if (!(privileged_fraction > 0.0 && privileged_fraction < 1.0))
        throw DataError("synthesize: privileged_fraction must be in (0,1)");
    if (positive_rate_privileged < 0.0 || positive_rate_privileged > 1.0 ||
        positive_rate_unprivileged < 0.0 || positive_rate_unprivileged > 1.0)
        throw DataError("synthesize: positive rates must be in [0,1]");
    if (class_separation < 0.0)
        throw DataError("synthesize: class_separation must be >= 0");
}

Dataset synthesize(const SyntheticSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_total);
    const auto d = static_cast<std::size_t>(spec.feature_dim);

    Rng rng(derive_seed(spec.seed, 0x57a7ULL));

    Dataset ds;
    ds.features = Matrix(n, d);
    ds.labels.resize(n);
    ds.privileged.resize(n);
    ds.weights.assign(n, 1.0);
    ds.feature_names.reserve(d);
    for (std::size_t j = 0; j < d; ++j)
        ds.feature_names.push_back("x" + std::to_string(j));
    ds.provenance = "synthetic/seed" + std::to_string(spec.seed);

    // Class-1 mean offset per coordinate so the mean gap has the requested norm.
    const double offset = spec.class_separation / std::sqrt(static_cast<double>(d));

    for (std::size_t i = 0; i < n; ++i) {
        const bool priv = rng.bernoulli(spec.privileged_fraction);
        const double rate = priv ? spec.positive_rate_privileged
                                 : spec.positive_rate_unprivileged;
        const bool pos = rng.bernoulli(rate);
        ds.privileged[i] = priv ? 1 : 0;
        ds.labels[i] = pos ? 1 : 0;
        auto row = ds.features.row(i);
        for (std::size_t j = 0; j < d; ++j)
            row[j] = rng.normal() + (pos ? offset : 0.0);
    }
    return ds;
}

} // namespace fairaudit

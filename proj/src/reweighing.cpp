#include "fairaudit/reweighing.hpp"

#include "fairaudit/errors.hpp"

namespace fairaudit {

FourWeights compute_weights(const GroupCounts& c) {
    if (c.n_pp == 0) throw DataError("reweighing: empty cell (positive, privileged)");
    if (c.n_pup == 0) throw DataError("reweighing: empty cell (positive, unprivileged)");
    if (c.n_np == 0) throw DataError("reweighing: empty cell (negative, privileged)");
    if (c.n_nup == 0) throw DataError("reweighing: empty cell (negative, unprivileged)");

    // Integer numerators/denominators, one division per coefficient.
    FourWeights w;
    w.w_pp = static_cast<double>(c.n_p * c.n_pos) / static_cast<double>(c.n_total * c.n_pp);
    w.w_pup = static_cast<double>(c.n_up * c.n_pos) / static_cast<double>(c.n_total * c.n_pup);
    w.w_np = static_cast<double>(c.n_p * c.n_neg) / static_cast<double>(c.n_total * c.n_np);
    w.w_nup = static_cast<double>(c.n_up * c.n_neg) / static_cast<double>(c.n_total * c.n_nup);
    return w;
}

Dataset apply_reweighing(const Dataset& ds) {
    const FourWeights w = compute_weights(count_groups(ds));
    Dataset out = ds;
    for (std::size_t i = 0; i < out.n(); ++i)
        out.weights[i] = w.cell(out.labels[i] == 1, out.privileged[i] == 1) * ds.weights[i];
    return out;
}

} // namespace fairaudit

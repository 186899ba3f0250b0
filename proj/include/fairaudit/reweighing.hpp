#ifndef FAIRAUDIT_REWEIGHING_HPP
#define FAIRAUDIT_REWEIGHING_HPP

#include "fairaudit/dataset.hpp"

namespace fairaudit {

/// The four reweighing coefficients, one per (label, group) cell.
/// Applying them makes label and group membership statistically independent
/// under the weighted distribution while preserving total mass.
struct FourWeights {
    double w_pp = 1.0;  // positive label, privileged group
    double w_pup = 1.0; // positive label, unprivileged group
    double w_np = 1.0;  // negative label, privileged group
    double w_nup = 1.0; // negative label, unprivileged group

    double cell(bool positive, bool privileged) const {
        if (positive) return privileged ? w_pp : w_pup;
        return privileged ? w_np : w_nup;
    }
};

/// Coefficients from unweighted cell counts:
///   w_cell = (group share of total) x (label share of total) / (cell share).
/// Computed as exact integer products divided once, so e.g. cell counts
/// (pos,priv)=12, (pos,unpriv)=3, (neg,priv)=6, (neg,unpriv)=9 give exactly
/// (0.75, 2.0, 1.5, 2/3).
/// Throws DataError naming the cell when any of the four cells is empty.
FourWeights compute_weights(const GroupCounts& counts);

/// New dataset whose weights are cell coefficient times incoming weight.
/// Labels, protected values and features are copied bit-identically.
/// Coefficients are always derived from unweighted row counts, so applying
/// twice squares the per-row coefficients (the transform is not idempotent
/// under unweighted counting).
Dataset apply_reweighing(const Dataset& ds);

} // namespace fairaudit

#endif

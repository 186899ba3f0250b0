#ifndef FAIRAUDIT_ORACLE_HPP
#define FAIRAUDIT_ORACLE_HPP

#include "fairaudit/metrics.hpp"

namespace fairaudit {

/// Recompute the full fairness report directly from definitions, sharing no
/// code with the production metric implementations. Slow and plain on
/// purpose: this is the cross-check the audit pipeline is validated against.
FairnessReport naive_oracle(const LabelVec& preds, const LabelVec& labels,
                            const LabelVec& privileged, const WeightVec& weights);

} // namespace fairaudit

#endif

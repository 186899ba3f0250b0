#ifndef FAIRAUDIT_METRICS_HPP
#define FAIRAUDIT_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fairaudit {

using LabelVec = std::vector<std::uint8_t>;
using WeightVec = std::vector<double>;

/// Weighted confusion tallies, split by protected group. With unit weights
/// the cells are the usual integer counts.
struct GroupConfusion {
    struct Cells {
        double tp = 0, fp = 0, tn = 0, fn = 0;
        double mass() const { return tp + fp + tn + fn; }
        double positives() const { return tp + fn; }
        double negatives() const { return fp + tn; }
        double tpr() const { return tp / positives(); }
        double fpr() const { return fp / negatives(); }
    };
    Cells priv;
    Cells unpriv;
};

/// The six audit metrics. di may be +infinity (positive unprivileged rate
/// over a zero privileged rate).
struct FairnessReport {
    double ba = 0;
    double spd = 0;
    double aod = 0;
    double di = 0;
    double eod = 0;
    double ti = 0;
};

GroupConfusion confusion(const LabelVec& preds, const LabelVec& labels,
                         const LabelVec& privileged, const WeightVec& weights);

/// Mean of weighted TPR and TNR over the pooled population.
double balanced_accuracy(const LabelVec& preds, const LabelVec& labels,
                         const WeightVec& weights);

/// Ratio of weighted positive-prediction rates, unprivileged over privileged.
double disparate_impact(const LabelVec& preds, const LabelVec& privileged,
                        const WeightVec& weights);

/// Difference of weighted positive-prediction rates, unprivileged minus
/// privileged.
double statistical_parity_difference(const LabelVec& preds, const LabelVec& privileged,
                                     const WeightVec& weights);

/// ((FPR_up - FPR_p) + (TPR_up - TPR_p)) / 2.
double average_odds_difference(const GroupConfusion& conf);

/// TPR_up - TPR_p.
double equal_opportunity_difference(const GroupConfusion& conf);

/// Entropy index over per-row benefit terms b_i = pred_i - label_i + 1,
/// (1/n) sum (b/mu) ln(b/mu) with mu = mean(b); the b=0 term contributes 0.
/// Unweighted. Throws when mu = 0 (every prediction a false negative).
double theil_index(const LabelVec& preds, const LabelVec& labels);

/// All six metrics at once; each field equals its individual operation's
/// output. Throws the first failing metric's error, naming the metric.
FairnessReport full_report(const LabelVec& preds, const LabelVec& labels,
                           const LabelVec& privileged, const WeightVec& weights);

/// "inf" for +infinity, otherwise the shortest round-trip decimal form.
std::string metric_to_string(double v);

} // namespace fairaudit

#endif

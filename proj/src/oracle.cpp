#include "fairaudit/oracle.hpp"

#include "fairaudit/errors.hpp"

#include <cmath>
#include <limits>

namespace fairaudit {

// Everything below recomputes from first principles with plain loops; it
// intentionally shares nothing with metrics.cpp beyond the report struct.
FairnessReport naive_oracle(const LabelVec& preds, const LabelVec& labels,
                            const LabelVec& privileged, const WeightVec& weights) {
    const std::size_t n = preds.size();
    if (labels.size() != n || privileged.size() != n || weights.size() != n)
        throw DataError("naive_oracle: input vectors differ in length");
    if (n == 0) throw DataError("naive_oracle: empty input");
    for (std::size_t i = 0; i < n; ++i) {
        if (preds[i] > 1 || labels[i] > 1 || privileged[i] > 1)
            throw DataError("naive_oracle: labels must be 0 or 1");
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw DataError("naive_oracle: weights must be positive and finite");
    }

    FairnessReport rep;

    { // balanced accuracy
        double tp = 0, fn = 0, tn = 0, fp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == 1) {
                if (preds[i] == 1) tp += weights[i];
                else fn += weights[i];
            } else {
                if (preds[i] == 0) tn += weights[i];
                else fp += weights[i];
            }
        }
        if (tp + fn == 0.0 || tn + fp == 0.0)
            throw DataError("naive_oracle: both classes required for balanced accuracy");
        rep.ba = 0.5 * (tp / (tp + fn) + tn / (tn + fp));
    }

    { // selection rates for SPD and DI
        double sel_p = 0, mass_p = 0, sel_up = 0, mass_up = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (privileged[i] == 1) {
                mass_p += weights[i];
                if (preds[i] == 1) sel_p += weights[i];
            } else {
                mass_up += weights[i];
                if (preds[i] == 1) sel_up += weights[i];
            }
        }
        if (mass_p == 0.0 || mass_up == 0.0)
            throw DataError("naive_oracle: both groups required");
        double rate_p = sel_p / mass_p, rate_up = sel_up / mass_up;
        rep.spd = rate_up - rate_p;
        if (rate_p == 0.0) {
            if (rate_up == 0.0)
                throw DataError("naive_oracle: disparate impact undefined (0/0)");
            rep.di = std::numeric_limits<double>::infinity();
        } else {
            rep.di = rate_up / rate_p;
        }
    }

    { // group-conditional error rates for AOD and EOD
        double tp_p = 0, fn_p = 0, fp_p = 0, tn_p = 0;
        double tp_u = 0, fn_u = 0, fp_u = 0, tn_u = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool p = privileged[i] == 1;
            double w = weights[i];
            if (labels[i] == 1) {
                if (preds[i] == 1) (p ? tp_p : tp_u) += w;
                else (p ? fn_p : fn_u) += w;
            } else {
                if (preds[i] == 1) (p ? fp_p : fp_u) += w;
                else (p ? tn_p : tn_u) += w;
            }
        }
        if (tp_p + fn_p == 0.0 || tp_u + fn_u == 0.0 || fp_p + tn_p == 0.0 ||
            fp_u + tn_u == 0.0)
            throw DataError("naive_oracle: a group lacks one of the classes");
        double tpr_p = tp_p / (tp_p + fn_p), tpr_u = tp_u / (tp_u + fn_u);
        double fpr_p = fp_p / (fp_p + tn_p), fpr_u = fp_u / (fp_u + tn_u);
        rep.aod = 0.5 * ((fpr_u - fpr_p) + (tpr_u - tpr_p));
        rep.eod = tpr_u - tpr_p;
    }

    { // Theil index over benefits b = yhat - y + 1, unweighted
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mu += double(preds[i]) - double(labels[i]) + 1.0;
        mu /= double(n);
        if (mu == 0.0)
            throw DataError("naive_oracle: theil index undefined (zero mean benefit)");
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double b = double(preds[i]) - double(labels[i]) + 1.0;
            if (b > 0.0) acc += (b / mu) * std::log(b / mu);
        }
        rep.ti = acc / double(n);
    }

    return rep;
}

} // namespace fairaudit

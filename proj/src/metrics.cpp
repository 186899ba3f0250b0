#include "fairaudit/metrics.hpp"

#include "fairaudit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace fairaudit {

namespace {

void check_binary(const LabelVec& v, const char* what) {
    for (auto x : v)
        if (x > 1) throw DataError(std::string("metrics: non-binary ") + what);
}

void check_lengths(std::size_t n, const LabelVec& labels, const LabelVec& privileged,
                   const WeightVec& weights) {
    if (labels.size() != n || privileged.size() != n || weights.size() != n)
        throw DataError("metrics: input length mismatch");
}

struct PositiveRates {
    double priv = 0, unpriv = 0;
};

// Weighted positive-prediction rate per group.
PositiveRates prediction_rates(const LabelVec& preds, const LabelVec& privileged,
                               const WeightVec& weights) {
    if (privileged.size() != preds.size() || weights.size() != preds.size())
        throw DataError("metrics: input length mismatch");
    check_binary(preds, "prediction");
    check_binary(privileged, "protected value");
    double mass_p = 0, mass_up = 0, pos_p = 0, pos_up = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double w = weights[i];
        if (privileged[i]) {
            mass_p += w;
            if (preds[i]) pos_p += w;
        } else {
            mass_up += w;
            if (preds[i]) pos_up += w;
        }
    }
    if (mass_p <= 0) throw DataError("metrics: empty privileged group");
    if (mass_up <= 0) throw DataError("metrics: empty unprivileged group");
    return {pos_p / mass_p, pos_up / mass_up};
}

} // namespace

GroupConfusion confusion(const LabelVec& preds, const LabelVec& labels,
                         const LabelVec& privileged, const WeightVec& weights) {
    check_lengths(preds.size(), labels, privileged, weights);
    check_binary(preds, "prediction");
    check_binary(labels, "label");
    check_binary(privileged, "protected value");
    GroupConfusion conf;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        auto& cells = privileged[i] ? conf.priv : conf.unpriv;
        const double w = weights[i];
        if (labels[i]) {
            preds[i] ? cells.tp += w : cells.fn += w;
        } else {
            preds[i] ? cells.fp += w : cells.tn += w;
        }
    }
    return conf;
}

double balanced_accuracy(const LabelVec& preds, const LabelVec& labels,
                         const WeightVec& weights) {
    if (labels.size() != preds.size() || weights.size() != preds.size())
        throw DataError("metrics: input length mismatch");
    check_binary(preds, "prediction");
    check_binary(labels, "label");
    double tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double w = weights[i];
        if (labels[i]) {
            preds[i] ? tp += w : fn += w;
        } else {
            preds[i] ? fp += w : tn += w;
        }
    }
    if (tp + fn <= 0 || tn + fp <= 0)
        throw DataError("balanced_accuracy: undefined rate, labels contain one class");
    return (tp / (tp + fn) + tn / (tn + fp)) / 2.0;
}

double disparate_impact(const LabelVec& preds, const LabelVec& privileged,
                        const WeightVec& weights) {
    const PositiveRates r = prediction_rates(preds, privileged, weights);
    if (r.priv == 0.0) {
        if (r.unpriv == 0.0)
            throw DataError("disparate_impact: undefined rate (0/0)");
        return std::numeric_limits<double>::infinity();
    }
    return r.unpriv / r.priv;
}

double statistical_parity_difference(const LabelVec& preds, const LabelVec& privileged,
                                     const WeightVec& weights) {
    const PositiveRates r = prediction_rates(preds, privileged, weights);
    return r.unpriv - r.priv;
}

double average_odds_difference(const GroupConfusion& conf) {
    if (conf.priv.positives() <= 0 || conf.unpriv.positives() <= 0)
        throw DataError("average_odds_difference: a group lacks positive labels");
    if (conf.priv.negatives() <= 0 || conf.unpriv.negatives() <= 0)
        throw DataError("average_odds_difference: a group lacks negative labels");
    return ((conf.unpriv.fpr() - conf.priv.fpr()) +
            (conf.unpriv.tpr() - conf.priv.tpr())) / 2.0;
}

double equal_opportunity_difference(const GroupConfusion& conf) {
    if (conf.priv.positives() <= 0 || conf.unpriv.positives() <= 0)
        throw DataError("equal_opportunity_difference: a group lacks positive labels");
    return conf.unpriv.tpr() - conf.priv.tpr();
}

double theil_index(const LabelVec& preds, const LabelVec& labels) {
    if (labels.size() != preds.size())
        throw DataError("metrics: input length mismatch");
    if (preds.empty()) throw DataError("theil_index: empty input");
    check_binary(preds, "prediction");
    check_binary(labels, "label");
    const auto n = static_cast<double>(preds.size());
    double sum_b = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        sum_b += static_cast<double>(int(preds[i]) - int(labels[i]) + 1);
    const double mu = sum_b / n;
    if (mu == 0.0)
        throw DataError("theil_index: undefined index, every prediction a false negative");
    double acc = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int b = int(preds[i]) - int(labels[i]) + 1;
        if (b == 0) continue; // lim x->0 of x ln x
        const double r = static_cast<double>(b) / mu;
        acc += r * std::log(r);
    }
    return acc / n;
}

FairnessReport full_report(const LabelVec& preds, const LabelVec& labels,
                           const LabelVec& privileged, const WeightVec& weights) {
    check_lengths(preds.size(), labels, privileged, weights);
    FairnessReport rep;
    auto tagged = [](const char* metric, auto&& fn) {
        try {
            return fn();
        } catch (const DataError& e) {
            throw DataError(std::string("full_report[") + metric + "]: " + e.what());
        }
    };
    rep.ba = tagged("ba", [&] { return balanced_accuracy(preds, labels, weights); });
    rep.spd = tagged("spd", [&] {
        return statistical_parity_difference(preds, privileged, weights);
    });
    const GroupConfusion conf = confusion(preds, labels, privileged, weights);
    rep.aod = tagged("aod", [&] { return average_odds_difference(conf); });
    rep.di = tagged("di", [&] { return disparate_impact(preds, privileged, weights); });
    rep.eod = tagged("eod", [&] { return equal_opportunity_difference(conf); });
    rep.ti = tagged("ti", [&] { return theil_index(preds, labels); });
    return rep;
}

std::string metric_to_string(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace fairaudit

#include "fairaudit/models/impl.hpp"

#include "fairaudit/errors.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

namespace fairaudit::detail {

namespace {
double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}
} // namespace

std::unique_ptr<Model> train_gnb(const ModelSpec& spec, const Dataset& ds) {
    check_training_labels(ds, "gnb");
    const std::size_t n = ds.n(), d = ds.dim();

    double mass0 = 0.0, mass1 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        (ds.labels[i] ? mass1 : mass0) += ds.weights[i];
    double total = mass0 + mass1;

    auto model = std::make_unique<GnbModel>();
    model->log_prior0 = std::log(mass0 / total);
    model->log_prior1 = std::log(mass1 / total);
    model->mean0.assign(d, 0.0);
    model->mean1.assign(d, 0.0);
    model->var0.assign(d, 0.0);
    model->var1.assign(d, 0.0);

    std::vector<double> mean_all(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = ds.features.row(i).data();
        double w = ds.weights[i];
        std::vector<double>& mean = ds.labels[i] ? model->mean1 : model->mean0;
        for (std::size_t j = 0; j < d; ++j) {
            mean[j] += w * row[j];
            mean_all[j] += w * row[j];
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        model->mean0[j] /= mass0;
        model->mean1[j] /= mass1;
        mean_all[j] /= total;
    }

    // biased (mass-normalized) per-class variances, plus the pooled variance
    // that anchors the smoothing floor
    std::vector<double> var_all(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = ds.features.row(i).data();
        double w = ds.weights[i];
        const std::vector<double>& mean = ds.labels[i] ? model->mean1 : model->mean0;
        std::vector<double>& var = ds.labels[i] ? model->var1 : model->var0;
        for (std::size_t j = 0; j < d; ++j) {
            double c = row[j] - mean[j];
            var[j] += w * c * c;
            double ca = row[j] - mean_all[j];
            var_all[j] += w * ca * ca;
        }
    }
    double max_pooled = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        model->var0[j] /= mass0;
        model->var1[j] /= mass1;
        max_pooled = std::max(max_pooled, var_all[j] / total);
    }
    double eps = spec.hp.var_smoothing * max_pooled;
    if (eps <= 0.0) eps = spec.hp.var_smoothing; // all features constant
    for (std::size_t j = 0; j < d; ++j) {
        model->var0[j] += eps;
        model->var1[j] += eps;
    }
    return model;
}

std::vector<double> GnbModel::score_rows(const Matrix& X) const {
    check_dim(X, mean0.size(), "gnb");
    const std::size_t d = mean0.size();
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const double* row = X.row(i).data();
        double l0 = log_prior0, l1 = log_prior1;
        for (std::size_t j = 0; j < d; ++j) {
            double c0 = row[j] - mean0[j];
            double c1 = row[j] - mean1[j];
            l0 -= 0.5 * (std::log(var0[j]) + c0 * c0 / var0[j]);
            l1 -= 0.5 * (std::log(var1[j]) + c1 * c1 / var1[j]);
        }
        out[i] = stable_sigmoid(l1 - l0);
    }
    return out;
}

void GnbModel::save(std::ostream& out) const {
    out << mean0.size() << "\n";
    write_double(out, log_prior0);
    out << " ";
    write_double(out, log_prior1);
    out << "\n";
    for (const std::vector<double>* vec : {&mean0, &var0, &mean1, &var1}) {
        for (std::size_t j = 0; j < vec->size(); ++j) {
            if (j) out << " ";
            write_double(out, (*vec)[j]);
        }
        out << "\n";
    }
}

std::unique_ptr<GnbModel> GnbModel::load(std::istream& in) {
    auto model = std::make_unique<GnbModel>();
    std::size_t d = 0;
    if (!(in >> d)) throw DataError("model file: bad gnb header");
    model->log_prior0 = read_double(in, "gnb prior");
    model->log_prior1 = read_double(in, "gnb prior");
    for (std::vector<double>* vec : {&model->mean0, &model->var0, &model->mean1, &model->var1}) {
        vec->resize(d);
        for (double& v : *vec) v = read_double(in, "gnb parameter");
    }
    return model;
}

} // namespace fairaudit::detail

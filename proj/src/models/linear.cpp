#include "fairaudit/models/impl.hpp"

#include "fairaudit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

namespace fairaudit::detail {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

/// In-place Cholesky solve of A x = b for symmetric positive definite A
/// (row-major D x D). Returns false when a pivot fails.
bool cholesky_solve(std::vector<double>& A, std::vector<double>& b, std::size_t D) {
    for (std::size_t j = 0; j < D; ++j) {
        double diag = A[j * D + j];
        for (std::size_t k = 0; k < j; ++k) diag -= A[j * D + k] * A[j * D + k];
        if (!(diag > 0.0)) return false;
        diag = std::sqrt(diag);
        A[j * D + j] = diag;
        for (std::size_t i = j + 1; i < D; ++i) {
            double v = A[i * D + j];
            for (std::size_t k = 0; k < j; ++k) v -= A[i * D + k] * A[j * D + k];
            A[i * D + j] = v / diag;
        }
    }
    // forward substitution L y = b
    for (std::size_t i = 0; i < D; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= A[i * D + k] * b[k];
        b[i] = v / A[i * D + i];
    }
    // back substitution L^T x = y
    for (std::size_t ii = D; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < D; ++k) v -= A[k * D + ii] * b[k];
        b[ii] = v / A[ii * D + ii];
    }
    return true;
}

/// Normalize weights to total mass n so the fit is invariant under uniform
/// weight rescaling even with an L2 penalty in play.
std::vector<double> normalized_weights(const WeightVec& w) {
    double total = 0.0;
    for (double v : w) total += v;
    double scale = double(w.size()) / total;
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] * scale;
    return out;
}

} // namespace

LossGrad logreg_loss_grad(const Matrix& X, const LabelVec& y, const WeightVec& w,
                          double l2, const std::vector<double>& beta) {
    const std::size_t n = X.rows, d = X.cols;
    if (beta.size() != d + 1)
        throw UsageError("logreg_loss_grad: beta must have dim+1 entries");
    std::vector<double> wn = normalized_weights(w);

    LossGrad out;
    out.loss = 0.0;
    out.grad.assign(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X.row(i).data();
        double z = beta[0];
        for (std::size_t j = 0; j < d; ++j) z += beta[j + 1] * row[j];
        out.loss += wn[i] * (softplus(z) - (y[i] ? z : 0.0));
        double r = wn[i] * (sigmoid(z) - double(y[i]));
        out.grad[0] += r;
        for (std::size_t j = 0; j < d; ++j) out.grad[j + 1] += r * row[j];
    }
    for (std::size_t j = 1; j <= d; ++j) {
        out.loss += 0.5 * l2 * beta[j] * beta[j];
        out.grad[j] += l2 * beta[j];
    }
    out.loss /= double(n);
    for (double& g : out.grad) g /= double(n);
    return out;
}

std::unique_ptr<Model> train_logreg(const ModelSpec& spec, const Dataset& ds) {
    check_training_labels(ds, "logreg");
    const std::size_t n = ds.n(), d = ds.dim(), D = d + 1;
    const double l2 = spec.hp.l2;
    std::vector<double> wn = normalized_weights(ds.weights);

    std::vector<double> beta(D, 0.0);
    std::vector<double> z(n, 0.0), p(n);

    auto loss_at = [&](const std::vector<double>& b, std::vector<double>& zs) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = ds.features.row(i).data();
            double zi = b[0];
            for (std::size_t j = 0; j < d; ++j) zi += b[j + 1] * row[j];
            zs[i] = zi;
            loss += wn[i] * (softplus(zi) - (ds.labels[i] ? zi : 0.0));
        }
        for (std::size_t j = 1; j < D; ++j) loss += 0.5 * l2 * b[j] * b[j];
        return loss / double(n);
    };

    double loss = loss_at(beta, z);
    int iterations = 0;
    std::vector<double> H(D * D), g(D), trial(D), ztrial(n);

    for (int iter = 0; iter < spec.hp.max_iterations; ++iter) {
        // gradient and Hessian of the penalized weighted mean log-loss
        std::fill(H.begin(), H.end(), 0.0);
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = ds.features.row(i).data();
            double pi = sigmoid(z[i]);
            p[i] = pi;
            double r = wn[i] * (pi - double(ds.labels[i]));
            double s = wn[i] * pi * (1.0 - pi);
            g[0] += r;
            H[0] += s;
            for (std::size_t a = 0; a < d; ++a) {
                double va = row[a];
                g[a + 1] += r * va;
                double sva = s * va;
                H[a + 1] += sva; // row 0, column a+1
                double* hrow = &H[(a + 1) * D];
                for (std::size_t b = a; b < d; ++b) hrow[b + 1] += sva * row[b];
            }
        }
        for (std::size_t j = 1; j < D; ++j) {
            g[j] += l2 * beta[j];
            H[j * D + j] += l2;
        }
        // mirror the upper triangle
        for (std::size_t a = 0; a < D; ++a)
            for (std::size_t b = a + 1; b < D; ++b) H[b * D + a] = H[a * D + b];

        // Newton direction, with escalating jitter if the Hessian is not SPD
        std::vector<double> delta = g;
        std::vector<double> Hc = H;
        double jitter = 1e-12;
        while (!cholesky_solve(Hc, delta, D)) {
            if (jitter > 1e2) throw TrainError("logreg: singular Hessian");
            Hc = H;
            for (std::size_t j = 0; j < D; ++j) Hc[j * D + j] += jitter;
            delta = g;
            jitter *= 1e3;
        }

        // damped step: halve until the loss decreases
        double eta = 1.0;
        double new_loss = loss;
        bool improved = false;
        for (int half = 0; half < 50; ++half) {
            for (std::size_t j = 0; j < D; ++j) trial[j] = beta[j] - eta * delta[j];
            new_loss = loss_at(trial, ztrial);
            if (new_loss < loss) {
                improved = true;
                break;
            }
            eta *= 0.5;
        }
        if (!improved) break; // at a (numerical) minimum already
        beta.swap(trial);
        z.swap(ztrial);
        ++iterations;
        double drop = loss - new_loss;
        loss = new_loss;
        if (drop <= spec.hp.tolerance * (std::abs(loss) + 1e-12)) break;
    }

    auto model = std::make_unique<LogregModel>();
    model->intercept = beta[0];
    model->coef.assign(beta.begin() + 1, beta.end());
    model->iterations = iterations;
    return model;
}

std::vector<double> LogregModel::score_rows(const Matrix& X) const {
    check_dim(X, coef.size(), "logreg");
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const double* row = X.row(i).data();
        double z = intercept;
        for (std::size_t j = 0; j < coef.size(); ++j) z += coef[j] * row[j];
        out[i] = sigmoid(z);
    }
    return out;
}

void LogregModel::save(std::ostream& out) const {
    out << coef.size() << " " << iterations << "\n";
    write_double(out, intercept);
    out << "\n";
    for (double c : coef) {
        write_double(out, c);
        out << "\n";
    }
}

std::unique_ptr<LogregModel> LogregModel::load(std::istream& in) {
    auto model = std::make_unique<LogregModel>();
    std::size_t d = 0;
    if (!(in >> d >> model->iterations))
        throw DataError("model file: bad logreg header");
    model->intercept = read_double(in, "logreg intercept");
    model->coef.resize(d);
    for (double& c : model->coef) c = read_double(in, "logreg coefficient");
    return model;
}

} // namespace fairaudit::detail

#include "fairaudit/models/impl.hpp"

#include "fairaudit/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

namespace fairaudit::detail {

std::unique_ptr<Model> train_knn(const ModelSpec& spec, const Dataset& ds) {
    check_training_labels(ds, "knn");
    auto model = std::make_unique<KnnModel>();
    model->k = spec.hp.k;
    model->train_x = ds.features;
    model->train_y = ds.labels;
    return model;
}

std::vector<double> KnnModel::score_rows(const Matrix& X) const {
    check_dim(X, train_x.cols, "knn");
    const std::size_t n = train_x.rows, d = train_x.cols;
    const std::size_t kk = std::min<std::size_t>(std::size_t(k), n);

    std::vector<double> out(X.rows);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t q = 0; q < X.rows; ++q) {
        const double* query = X.row(q).data();
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = train_x.row(i).data();
            double d2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                double diff = query[j] - row[j];
                d2 += diff * diff;
            }
            dist[i] = {d2, i};
        }
        // equal distances resolve toward the lowest training row index
        std::nth_element(dist.begin(), dist.begin() + (kk - 1), dist.end());
        std::size_t favorable = 0;
        for (std::size_t i = 0; i < kk; ++i)
            if (train_y[dist[i].second]) ++favorable;
        out[q] = double(favorable) / double(kk);
    }
    return out;
}

void KnnModel::save(std::ostream& out) const {
    out << k << " " << train_x.rows << " " << train_x.cols << "\n";
    for (std::size_t i = 0; i < train_x.rows; ++i) {
        out << int(train_y[i]);
        for (std::size_t j = 0; j < train_x.cols; ++j) {
            out << " ";
            write_double(out, train_x.at(i, j));
        }
        out << "\n";
    }
}

std::unique_ptr<KnnModel> KnnModel::load(std::istream& in) {
    auto model = std::make_unique<KnnModel>();
    std::size_t n = 0, d = 0;
    if (!(in >> model->k >> n >> d)) throw DataError("model file: bad knn header");
    model->train_x = Matrix(n, d);
    model->train_y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int label = 0;
        if (!(in >> label)) throw DataError("model file: truncated knn rows");
        model->train_y[i] = std::uint8_t(label);
        for (std::size_t j = 0; j < d; ++j)
            model->train_x.at(i, j) = read_double(in, "knn feature");
    }
    return model;
}

} // namespace fairaudit::detail

#include "fairaudit/models.hpp"

#include "fairaudit/errors.hpp"
#include "fairaudit/models/impl.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

namespace fairaudit {

const char* kind_slug(ModelKind kind) {
    switch (kind) {
        case ModelKind::logreg: return "logreg";
        case ModelKind::dtree: return "dtree";
        case ModelKind::knn: return "knn";
        case ModelKind::gnb: return "gnb";
        case ModelKind::rforest: return "rforest";
    }
    return "?";
}

const char* kind_display_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::logreg: return "Logistic Regression";
        case ModelKind::dtree: return "Decision Tree";
        case ModelKind::knn: return "K-Nearest Neighbors";
        case ModelKind::gnb: return "Gaussian Naive Bayes";
        case ModelKind::rforest: return "Random Forest";
    }
    return "?";
}

std::optional<ModelKind> kind_from_slug(const std::string& slug) {
    if (slug == "logreg") return ModelKind::logreg;
    if (slug == "dtree") return ModelKind::dtree;
    if (slug == "knn") return ModelKind::knn;
    if (slug == "gnb") return ModelKind::gnb;
    if (slug == "rforest") return ModelKind::rforest;
    return std::nullopt;
}

void ModelSpec::validate() const {
    switch (kind) {
        case ModelKind::logreg:
            if (hp.l2 < 0.0) throw UsageError("logreg: l2 must be >= 0");
            if (hp.max_iterations < 1) throw UsageError("logreg: max_iterations must be >= 1");
            if (!(hp.tolerance > 0.0)) throw UsageError("logreg: tolerance must be > 0");
            break;
        case ModelKind::dtree:
        case ModelKind::rforest:
            if (hp.min_samples_leaf < 1)
                throw UsageError("tree: min_samples_leaf must be >= 1");
            if (kind == ModelKind::rforest && hp.n_trees < 1)
                throw UsageError("rforest: n_trees must be >= 1");
            break;
        case ModelKind::knn:
            if (hp.k < 1) throw UsageError("knn: k must be >= 1");
            break;
        case ModelKind::gnb:
            if (!(hp.var_smoothing > 0.0))
                throw UsageError("gnb: var_smoothing must be > 0");
            break;
    }
}

std::unique_ptr<Model> train(const ModelSpec& spec, const Dataset& training) {
    spec.validate();
    training.validate();
    switch (spec.kind) {
        case ModelKind::logreg: return detail::train_logreg(spec, training);
        case ModelKind::dtree: return detail::train_dtree(spec, training);
        case ModelKind::knn: return detail::train_knn(spec, training);
        case ModelKind::gnb: return detail::train_gnb(spec, training);
        case ModelKind::rforest: return detail::train_rforest(spec, training);
    }
    throw UsageError("train: unknown model kind");
}

std::vector<double> predict_scores(const Model& model, const Matrix& features) {
    return model.score_rows(features);
}

LabelVec labels_from_scores(const std::vector<double>& scores, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw UsageError("predict: threshold must lie in [0,1]");
    LabelVec out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = scores[i] >= threshold ? 1 : 0;
    return out;
}

LabelVec predict_labels(const Model& model, const Matrix& features, double threshold) {
    return labels_from_scores(model.score_rows(features), threshold);
}

void save_model(const Model& model, std::ostream& out) {
    out << "fairaudit-model 1 " << kind_slug(model.kind()) << "\n";
    model.save(out);
    if (!out) throw DataError("model file: write failed");
}

std::unique_ptr<Model> load_model(std::istream& in) {
    std::string magic, slug;
    int version = 0;
    if (!(in >> magic >> version >> slug) || magic != "fairaudit-model")
        throw DataError("model file: missing header");
    if (version != 1) throw DataError("model file: unsupported version");
    auto kind = kind_from_slug(slug);
    if (!kind) throw DataError("model file: unknown model kind '" + slug + "'");
    switch (*kind) {
        case ModelKind::logreg: return detail::LogregModel::load(in);
        case ModelKind::dtree: return detail::DtreeModel::load(in);
        case ModelKind::knn: return detail::KnnModel::load(in);
        case ModelKind::gnb: return detail::GnbModel::load(in);
        case ModelKind::rforest: return detail::RforestModel::load(in);
    }
    throw DataError("model file: unknown model kind");
}

namespace detail {

void check_dim(const Matrix& X, std::size_t expected, const char* who) {
    if (X.cols != expected)
        throw DataError(std::string(who) + ": expected " + std::to_string(expected) +
                        " features, got " + std::to_string(X.cols));
}

void check_training_labels(const Dataset& ds, const char* who) {
    std::size_t positives = 0;
    for (std::uint8_t y : ds.labels) positives += y;
    if (positives == 0 || positives == ds.n())
        throw TrainError(std::string(who) + ": training data has a single class");
}

void write_double(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    out << buf;
}

double read_double(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token))
        throw DataError(std::string("model file: missing ") + what);
    return std::strtod(token.c_str(), nullptr);
}

} // namespace detail

} // namespace fairaudit

#ifndef FAIRAUDIT_MODELS_HPP
#define FAIRAUDIT_MODELS_HPP

#include "fairaudit/dataset.hpp"
#include "fairaudit/matrix.hpp"
#include "fairaudit/metrics.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fairaudit {

enum class ModelKind { logreg, dtree, knn, gnb, rforest };

const char* kind_slug(ModelKind kind);
const char* kind_display_name(ModelKind kind);
std::optional<ModelKind> kind_from_slug(const std::string& slug);

/// Hyperparameters for all five kinds in one record; each kind reads only its
/// own fields. Defaults are the documented ones.
struct Hyperparams {
    // logreg: L2 penalty on the mean weighted log-loss, damped IRLS
    double l2 = 1.0;
    int max_iterations = 100;
    double tolerance = 1e-8; // relative loss change

    // dtree / rforest trees: CART on weighted Gini, midpoint split candidates
    int max_depth = -1; // -1 = unlimited
    int min_samples_leaf = 1; // row count per side of a split

    // knn: unweighted Euclidean vote, distance ties broken by lowest row index
    int k = 5;

    // gnb: variance floor = var_smoothing x largest pooled feature variance
    double var_smoothing = 1e-9;

    // rforest: weighted bootstrap, ceil(sqrt(d)) features per split
    int n_trees = 100;
};

struct ModelSpec {
    ModelKind kind = ModelKind::logreg;
    Hyperparams hp;
    std::uint64_t seed = 0;

    void validate() const; // throws UsageError on out-of-range hyperparameters
};

/// A fitted classifier. Immutable; scoring is pure and safe to share across
/// threads. Scores estimate the probability of the favorable class.
class Model {
public:
    virtual ~Model() = default;
    virtual ModelKind kind() const = 0;
    virtual std::size_t dim() const = 0;
    /// One score in [0,1] per row of X. Throws DataError on dimension mismatch.
    virtual std::vector<double> score_rows(const Matrix& X) const = 0;
    virtual void save(std::ostream& out) const = 0;
};

/// Fit a model of spec.kind to the training data. Deterministic for a fixed
/// spec and dataset. Throws TrainError when only one class is present.
std::unique_ptr<Model> train(const ModelSpec& spec, const Dataset& training);

std::vector<double> predict_scores(const Model& model, const Matrix& features);

/// Label 1 where score >= threshold. Throws UsageError for a threshold
/// outside [0,1].
LabelVec predict_labels(const Model& model, const Matrix& features,
                        double threshold = 0.5);
LabelVec labels_from_scores(const std::vector<double>& scores, double threshold);

/// Versioned text serialization; loading reproduces identical predictions.
void save_model(const Model& model, std::ostream& out);
std::unique_ptr<Model> load_model(std::istream& in);

namespace detail {
/// Mean weighted logistic loss with L2 penalty (intercept unpenalized) and
/// its gradient, both at beta = [intercept, coefficients...]. Exposed for
/// finite-difference verification.
struct LossGrad {
    double loss;
    std::vector<double> grad;
};
LossGrad logreg_loss_grad(const Matrix& X, const LabelVec& y,
                          const WeightVec& w, double l2,
                          const std::vector<double>& beta);
} // namespace detail

} // namespace fairaudit

#endif

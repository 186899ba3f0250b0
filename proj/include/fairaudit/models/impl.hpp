#ifndef FAIRAUDIT_MODELS_IMPL_HPP
#define FAIRAUDIT_MODELS_IMPL_HPP

// Concrete model classes. Internal: user code goes through models.hpp.

#include "fairaudit/models.hpp"
#include "fairaudit/models/tree_internal.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace fairaudit::detail {

class LogregModel final : public Model {
public:
    double intercept = 0.0;
    std::vector<double> coef;
    int iterations = 0; // informational

    ModelKind kind() const override { return ModelKind::logreg; }
    std::size_t dim() const override { return coef.size(); }
    std::vector<double> score_rows(const Matrix& X) const override;
    void save(std::ostream& out) const override;
    static std::unique_ptr<LogregModel> load(std::istream& in);
};

class DtreeModel final : public Model {
public:
    std::size_t n_features = 0;
    std::vector<TreeNode> nodes;

    ModelKind kind() const override { return ModelKind::dtree; }
    std::size_t dim() const override { return n_features; }
    std::vector<double> score_rows(const Matrix& X) const override;
    void save(std::ostream& out) const override;
    static std::unique_ptr<DtreeModel> load(std::istream& in);
};

class KnnModel final : public Model {
public:
    int k = 5;
    Matrix train_x;
    std::vector<std::uint8_t> train_y;

    ModelKind kind() const override { return ModelKind::knn; }
    std::size_t dim() const override { return train_x.cols; }
    std::vector<double> score_rows(const Matrix& X) const override;
    void save(std::ostream& out) const override;
    static std::unique_ptr<KnnModel> load(std::istream& in);
};

class GnbModel final : public Model {
public:
    double log_prior0 = 0.0, log_prior1 = 0.0;
    std::vector<double> mean0, mean1, var0, var1;

    ModelKind kind() const override { return ModelKind::gnb; }
    std::size_t dim() const override { return mean0.size(); }
    std::vector<double> score_rows(const Matrix& X) const override;
    void save(std::ostream& out) const override;
    static std::unique_ptr<GnbModel> load(std::istream& in);
};

class RforestModel final : public Model {
public:
    std::size_t n_features = 0;
    std::vector<std::vector<TreeNode>> trees;

    ModelKind kind() const override { return ModelKind::rforest; }
    std::size_t dim() const override { return n_features; }
    std::vector<double> score_rows(const Matrix& X) const override;
    void save(std::ostream& out) const override;
    static std::unique_ptr<RforestModel> load(std::istream& in);
};

std::unique_ptr<Model> train_logreg(const ModelSpec&, const Dataset&);
std::unique_ptr<Model> train_dtree(const ModelSpec&, const Dataset&);
std::unique_ptr<Model> train_knn(const ModelSpec&, const Dataset&);
std::unique_ptr<Model> train_gnb(const ModelSpec&, const Dataset&);
std::unique_ptr<Model> train_rforest(const ModelSpec&, const Dataset&);

void check_dim(const Matrix& X, std::size_t expected, const char* who);
void check_training_labels(const Dataset& ds, const char* who);

void write_double(std::ostream& out, double v);
double read_double(std::istream& in, const char* what);

} // namespace fairaudit::detail

#endif

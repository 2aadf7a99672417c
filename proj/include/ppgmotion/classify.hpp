#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ppgmotion/types.hpp"

namespace ppg::ml {

struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<int> y;  // class ids, 0..kNumClasses-1
    std::vector<std::string> feature_names;

    std::size_t rows() const { return x.size(); }
    std::size_t cols() const { return x.empty() ? 0 : x.front().size(); }
    std::array<std::size_t, kNumClasses> class_counts() const;
};

// Z-score parameters; fit on the training split only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    void fit(const Dataset& train);
    std::vector<double> apply(const std::vector<double>& row) const;
    Dataset apply(const Dataset& data) const;
};

struct Split {
    Dataset train;
    Dataset test;
};

// Per-class shuffle-and-cut; deterministic for a fixed seed. Every class
// must contribute at least 10 rows.
Split split_stratified(const Dataset& data, double test_fraction, std::uint64_t seed);

class Classifier {
  public:
    virtual ~Classifier() = default;
    virtual void fit(const Dataset& train) = 0;
    virtual int predict(const std::vector<double>& row) const = 0;
    virtual const std::string& name() const = 0;
};

enum class Family { Lda, GaussianNb, DecisionTree, Knn, Svm, Ann };

struct ModelSpec {
    std::string name;
    Family family = Family::Lda;
    int knn_k = 1;
    int svm_degree = 1;        // 1 = linear kernel, 2/3 = polynomial with coef 1
    double svm_c = 1.0;
    int tree_max_depth = 12;
    int tree_min_leaf = 5;
    int ann_hidden = 100;
    double ann_learning_rate = 0.01;
    double ann_momentum = 0.9;
    int ann_batch = 32;
    int ann_max_epochs = 500;
    int ann_patience = 20;
};

// lda, gaussian_nb, decision_tree, knn_{fine,medium,coarse},
// svm_{linear,quadratic,cubic}, ann_{narrow,medium,wide}.
std::vector<ModelSpec> default_presets();
ModelSpec preset_by_name(const std::string& name);

std::unique_ptr<Classifier> make_classifier(const ModelSpec& spec, std::uint64_t seed);

// Stratified k-fold cross-validation accuracy (percent); the model is
// retrained per fold on standardized fold-training rows.
double cross_validate(const Dataset& train, const ModelSpec& spec, int k, std::uint64_t seed);

struct ClassMetrics {
    long tp = 0, tn = 0, fp = 0, fn = 0;
    double precision = 0.0;    // percent
    double sensitivity = 0.0;  // percent
    double f1 = 0.0;           // percent
    bool undefined = false;    // a zero denominator was reported as 0
};

ClassMetrics metrics_from_counts(long tp, long tn, long fp, long fn);

struct Evaluation {
    std::array<std::array<long, kNumClasses>, kNumClasses> confusion{};  // [true][pred]
    double accuracy = 0.0;  // percent, correct / total
    std::array<ClassMetrics, kNumClasses> per_class{};
    std::size_t total = 0;
};

Evaluation evaluate(const Classifier& model, const Dataset& test);

struct ModelReport {
    std::string model;
    bool ok = true;
    std::string error;
    double validation_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::array<ClassMetrics, kNumClasses> per_class{};
    Evaluation eval;
};

// split -> cross-validate -> fit -> evaluate for every preset; failures are
// marked rows and the grid continues.
std::vector<ModelReport> benchmark_grid(const Dataset& data, const std::vector<ModelSpec>& presets,
                                        std::uint64_t seed);

// One-hidden-layer network exposed for direct training and gradient checks.
struct AnnNetwork {
    std::size_t inputs = 0, hidden = 0, outputs = 0;
    std::vector<double> w1, b1, w2, b2;  // w1: hidden x inputs, w2: outputs x hidden

    void init(std::size_t in, std::size_t hid, std::size_t out, std::uint64_t seed);
    std::vector<double> forward(const std::vector<double>& row) const;  // softmax probabilities

    std::size_t parameter_count() const;
    double get_parameter(std::size_t i) const;
    void set_parameter(std::size_t i, double v);

    // Mean cross-entropy over the batch; accumulates dLoss/dParam into grad
    // (same layout as the flattened parameters) when grad is non-null.
    double loss_and_gradient(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                             std::vector<double>* grad) const;
};

// Mini-batch gradient descent with momentum and early stopping on an
// internal validation split.
class AnnClassifier final : public Classifier {
  public:
    AnnClassifier(ModelSpec spec, std::uint64_t seed);
    void fit(const Dataset& train) override;
    int predict(const std::vector<double>& row) const override;
    const std::string& name() const override { return spec_.name; }

    const AnnNetwork& network() const { return net_; }
    const std::vector<double>& training_loss_history() const { return train_loss_; }

  private:
    ModelSpec spec_;
    std::uint64_t seed_;
    bool fitted_ = false;
    AnnNetwork net_;
    std::vector<double> train_loss_;
};

}  // namespace ppg::ml

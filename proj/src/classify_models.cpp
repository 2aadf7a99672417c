#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ppgmotion/classify.hpp"

// Linear discriminant analysis, Gaussian naive Bayes and k-nearest
// neighbours. The decision tree, SVM and ANN live in their own files.

namespace ppg::ml {

namespace {

void require_fitted(bool fitted) {
    if (!fitted) throw std::logic_error("classifier: predict called before fit");
}

void require_finite_row(const std::vector<double>& row) {
    for (double v : row)
        if (!std::isfinite(v)) throw std::invalid_argument("classifier: non-finite feature value");
}

// Cholesky solve of A x = b for symmetric positive definite A (row-major).
// Returns false when the factorization breaks down.
bool cholesky_solve(std::vector<double> a, std::size_t n, std::vector<double> b,
                    std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) return false;
        const double l = std::sqrt(d);
        a[j * n + j] = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {  // forward
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {  // backward
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * x[k];
        x[ii] = s / a[ii * n + ii];
    }
    return true;
}

class LdaClassifier final : public Classifier {
  public:
    explicit LdaClassifier(ModelSpec spec) : spec_(std::move(spec)) {}

    void fit(const Dataset& train) override {
        const std::size_t n = train.rows();
        const std::size_t d = train.cols();
        if (n == 0 || d == 0) throw std::invalid_argument("lda: empty training set");

        classes_.clear();
        std::array<std::size_t, kNumClasses> counts{};
        for (int label : train.y) counts[static_cast<std::size_t>(label)]++;
        for (std::size_t c = 0; c < kNumClasses; ++c)
            if (counts[c] > 0) classes_.push_back(static_cast<int>(c));
        if (classes_.size() < 2) throw std::invalid_argument("lda: need at least 2 classes");

        std::vector<std::vector<double>> means(classes_.size(), std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const auto ci = class_pos(train.y[i]);
            for (std::size_t j = 0; j < d; ++j) means[ci][j] += train.x[i][j];
        }
        for (std::size_t ci = 0; ci < classes_.size(); ++ci)
            for (std::size_t j = 0; j < d; ++j)
                means[ci][j] /= static_cast<double>(counts[static_cast<std::size_t>(classes_[ci])]);

        // Pooled within-class covariance.
        std::vector<double> cov(d * d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto ci = class_pos(train.y[i]);
            for (std::size_t j = 0; j < d; ++j) {
                const double dj = train.x[i][j] - means[ci][j];
                for (std::size_t k = j; k < d; ++k)
                    cov[j * d + k] += dj * (train.x[i][k] - means[ci][k]);
            }
        }
        const double denom = static_cast<double>(n > classes_.size() ? n - classes_.size() : 1);
        double trace = 0.0;
        for (std::size_t j = 0; j < d; ++j) trace += cov[j * d + j] / denom;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = j; k < d; ++k) {
                cov[j * d + k] /= denom;
                cov[k * d + j] = cov[j * d + k];
            }

        weights_.assign(classes_.size(), {});
        bias_.assign(classes_.size(), 0.0);
        double ridge = 1e-8 * (trace / static_cast<double>(d) + 1.0);
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<double> reg = cov;
            for (std::size_t j = 0; j < d; ++j) reg[j * d + j] += ridge;
            bool ok = true;
            for (std::size_t ci = 0; ci < classes_.size() && ok; ++ci)
                ok = cholesky_solve(reg, d, means[ci], weights_[ci]);
            if (ok) break;
            ridge *= 100.0;
            if (attempt == 7) throw std::runtime_error("lda: covariance not invertible");
        }
        for (std::size_t ci = 0; ci < classes_.size(); ++ci) {
            double m = 0.0;
            for (std::size_t j = 0; j < d; ++j) m += means[ci][j] * weights_[ci][j];
            const double prior =
                static_cast<double>(counts[static_cast<std::size_t>(classes_[ci])]) / static_cast<double>(n);
            bias_[ci] = -0.5 * m + std::log(prior);
        }
        fitted_ = true;
    }

    int predict(const std::vector<double>& row) const override {
        require_fitted(fitted_);
        require_finite_row(row);
        double best = -std::numeric_limits<double>::infinity();
        int best_class = classes_.front();
        for (std::size_t ci = 0; ci < classes_.size(); ++ci) {
            double score = bias_[ci];
            for (std::size_t j = 0; j < row.size(); ++j) score += weights_[ci][j] * row[j];
            if (score > best) {
                best = score;
                best_class = classes_[ci];
            }
        }
        return best_class;
    }

    const std::string& name() const override { return spec_.name; }

  private:
    std::size_t class_pos(int label) const {
        return static_cast<std::size_t>(std::find(classes_.begin(), classes_.end(), label) -
                                        classes_.begin());
    }

    ModelSpec spec_;
    bool fitted_ = false;
    std::vector<int> classes_;
    std::vector<std::vector<double>> weights_;
    std::vector<double> bias_;
};

class GaussianNbClassifier final : public Classifier {
  public:
    explicit GaussianNbClassifier(ModelSpec spec) : spec_(std::move(spec)) {}

    void fit(const Dataset& train) override {
        const std::size_t n = train.rows();
        const std::size_t d = train.cols();
        if (n == 0 || d == 0) throw std::invalid_argument("gaussian_nb: empty training set");
        counts_.fill(0);
        for (int label : train.y) counts_[static_cast<std::size_t>(label)]++;

        mean_.assign(kNumClasses, std::vector<double>(d, 0.0));
        var_.assign(kNumClasses, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(train.y[i]);
            for (std::size_t j = 0; j < d; ++j) mean_[c][j] += train.x[i][j];
        }
        for (std::size_t c = 0; c < kNumClasses; ++c)
            if (counts_[c] > 0)
                for (std::size_t j = 0; j < d; ++j) mean_[c][j] /= static_cast<double>(counts_[c]);
        double max_var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(train.y[i]);
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = train.x[i][j] - mean_[c][j];
                var_[c][j] += diff * diff;
            }
        }
        for (std::size_t c = 0; c < kNumClasses; ++c)
            if (counts_[c] > 0)
                for (std::size_t j = 0; j < d; ++j) {
                    var_[c][j] /= static_cast<double>(counts_[c]);
                    max_var = std::max(max_var, var_[c][j]);
                }
        // Variance floor keeps degenerate features from producing infinities.
        floor_ = 1e-9 * (max_var + 1.0);
        total_ = n;
        fitted_ = true;
    }

    int predict(const std::vector<double>& row) const override {
        require_fitted(fitted_);
        require_finite_row(row);
        double best = -std::numeric_limits<double>::infinity();
        int best_class = 0;
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            if (counts_[c] == 0) continue;
            double log_post =
                std::log(static_cast<double>(counts_[c]) / static_cast<double>(total_));
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double var = std::max(var_[c][j], floor_);
                const double diff = row[j] - mean_[c][j];
                log_post += -0.5 * (std::log(2.0 * M_PI * var) + diff * diff / var);
            }
            if (log_post > best) {
                best = log_post;
                best_class = static_cast<int>(c);
            }
        }
        return best_class;
    }

    const std::string& name() const override { return spec_.name; }

  private:
    ModelSpec spec_;
    bool fitted_ = false;
    std::array<std::size_t, kNumClasses> counts_{};
    std::vector<std::vector<double>> mean_, var_;
    double floor_ = 1e-9;
    std::size_t total_ = 0;
};

class KnnClassifier final : public Classifier {
  public:
    explicit KnnClassifier(ModelSpec spec) : spec_(std::move(spec)) {
        if (spec_.knn_k < 1) throw std::invalid_argument("knn: k must be >= 1");
    }

    void fit(const Dataset& train) override {
        if (train.rows() == 0) throw std::invalid_argument("knn: empty training set");
        x_ = train.x;
        y_ = train.y;
        fitted_ = true;
    }

    int predict(const std::vector<double>& row) const override {
        require_fitted(fitted_);
        require_finite_row(row);
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(spec_.knn_k), x_.size());
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double diff = x_[i][j] - row[j];
                d2 += diff * diff;
            }
            dist.emplace_back(d2, i);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

        std::array<std::size_t, kNumClasses> votes{};
        for (std::size_t i = 0; i < k; ++i) votes[static_cast<std::size_t>(y_[dist[i].second])]++;
        const std::size_t top = *std::max_element(votes.begin(), votes.end());
        // Vote ties go to the tied class with the nearest neighbour.
        for (std::size_t i = 0; i < k; ++i) {
            const auto c = static_cast<std::size_t>(y_[dist[i].second]);
            if (votes[c] == top) return static_cast<int>(c);
        }
        return y_[dist.front().second];
    }

    const std::string& name() const override { return spec_.name; }

  private:
    ModelSpec spec_;
    bool fitted_ = false;
    std::vector<std::vector<double>> x_;
    std::vector<int> y_;
};

}  // namespace

std::unique_ptr<Classifier> make_lda(const ModelSpec& spec) {
    return std::make_unique<LdaClassifier>(spec);
}
std::unique_ptr<Classifier> make_gaussian_nb(const ModelSpec& spec) {
    return std::make_unique<GaussianNbClassifier>(spec);
}
std::unique_ptr<Classifier> make_knn(const ModelSpec& spec) {
    return std::make_unique<KnnClassifier>(spec);
}

}  // namespace ppg::ml

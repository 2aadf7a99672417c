#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ppgmotion/classify.hpp"

// One-vs-one soft-margin SVMs trained with sequential minimal optimization.
// Kernels: linear (dot product) and polynomial (dot + 1)^degree.

namespace ppg::ml {

namespace {

constexpr double kSmoTolerance = 1e-3;
constexpr int kSmoMaxPasses = 50;
constexpr double kAlphaEps = 1e-8;

double kernel(const std::vector<double>& a, const std::vector<double>& b, int degree) {
    double dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
    if (degree <= 1) return dot;
    return std::pow(dot + 1.0, degree);
}

// Binary SMO machine over rows with labels +-1.
struct BinarySvm {
    std::vector<std::vector<double>> sv;
    std::vector<double> sv_alpha_y;
    double bias = 0.0;
    int degree = 1;

    void train(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double c,
               int degree_in, std::uint64_t seed) {
        degree = degree_in;
        const std::size_t n = x.size();
        std::vector<double> alpha(n, 0.0);
        double b = 0.0;

        std::vector<std::vector<double>> gram(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                gram[i][j] = gram[j][i] = kernel(x[i], x[j], degree);

        auto decision = [&](std::size_t i) {
            double f = b;
            for (std::size_t k = 0; k < n; ++k)
                if (alpha[k] > 0.0) f += alpha[k] * y[k] * gram[k][i];
            return f;
        };

        std::mt19937_64 rng(seed ^ 0x53764du);
        int passes = 0;
        int guard = 0;
        const int max_sweeps = 300;
        while (passes < kSmoMaxPasses && guard++ < max_sweeps) {
            int changed = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ei = decision(i) - y[i];
                if (!((y[i] * ei < -kSmoTolerance && alpha[i] < c) ||
                      (y[i] * ei > kSmoTolerance && alpha[i] > 0.0)))
                    continue;
                std::size_t j = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
                if (j >= i) ++j;
                const double ej = decision(j) - y[j];
                const double ai_old = alpha[i];
                const double aj_old = alpha[j];
                double lo, hi;
                if (y[i] != y[j]) {
                    lo = std::max(0.0, aj_old - ai_old);
                    hi = std::min(c, c + aj_old - ai_old);
                } else {
                    lo = std::max(0.0, ai_old + aj_old - c);
                    hi = std::min(c, ai_old + aj_old);
                }
                if (lo >= hi) continue;
                const double eta = 2.0 * gram[i][j] - gram[i][i] - gram[j][j];
                if (eta >= 0.0) continue;
                double aj = aj_old - y[j] * (ei - ej) / eta;
                aj = std::clamp(aj, lo, hi);
                if (std::abs(aj - aj_old) < 1e-5) continue;
                const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
                alpha[i] = ai;
                alpha[j] = aj;
                const double b1 = b - ei - y[i] * (ai - ai_old) * gram[i][i] -
                                  y[j] * (aj - aj_old) * gram[i][j];
                const double b2 = b - ej - y[i] * (ai - ai_old) * gram[i][j] -
                                  y[j] * (aj - aj_old) * gram[j][j];
                if (ai > 0.0 && ai < c)
                    b = b1;
                else if (aj > 0.0 && aj < c)
                    b = b2;
                else
                    b = 0.5 * (b1 + b2);
                ++changed;
            }
            passes = (changed == 0) ? passes + 1 : 0;
        }

        bias = b;
        sv.clear();
        sv_alpha_y.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] > kAlphaEps) {
                sv.push_back(x[i]);
                sv_alpha_y.push_back(alpha[i] * y[i]);
            }
        }
    }

    double decision(const std::vector<double>& row) const {
        double f = bias;
        for (std::size_t k = 0; k < sv.size(); ++k) f += sv_alpha_y[k] * kernel(sv[k], row, degree);
        return f;
    }
};

class SvmClassifier final : public Classifier {
  public:
    SvmClassifier(ModelSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {
        if (spec_.svm_degree < 1 || spec_.svm_degree > 3)
            throw std::invalid_argument("svm: degree must be 1, 2 or 3");
        if (!(spec_.svm_c > 0.0)) throw std::invalid_argument("svm: C must be positive");
    }

    void fit(const Dataset& train) override {
        if (train.rows() == 0) throw std::invalid_argument("svm: empty training set");
        classes_.clear();
        auto counts = train.class_counts();
        for (std::size_t c = 0; c < kNumClasses; ++c)
            if (counts[c] > 0) classes_.push_back(static_cast<int>(c));
        if (classes_.size() < 2) throw std::invalid_argument("svm: need at least 2 classes");

        machines_.clear();
        pairs_.clear();
        for (std::size_t a = 0; a < classes_.size(); ++a) {
            for (std::size_t b = a + 1; b < classes_.size(); ++b) {
                std::vector<std::vector<double>> x;
                std::vector<int> y;
                for (std::size_t i = 0; i < train.rows(); ++i) {
                    if (train.y[i] == classes_[a]) {
                        x.push_back(train.x[i]);
                        y.push_back(+1);
                    } else if (train.y[i] == classes_[b]) {
                        x.push_back(train.x[i]);
                        y.push_back(-1);
                    }
                }
                BinarySvm machine;
                machine.train(x, y, spec_.svm_c, spec_.svm_degree,
                              seed_ + machines_.size() * 131u);
                machines_.push_back(std::move(machine));
                pairs_.emplace_back(classes_[a], classes_[b]);
            }
        }
        fitted_ = true;
    }

    int predict(const std::vector<double>& row) const override {
        if (!fitted_) throw std::logic_error("svm: predict called before fit");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("svm: non-finite feature");
        std::array<int, kNumClasses> votes{};
        std::array<double, kNumClasses> margin{};
        for (std::size_t m = 0; m < machines_.size(); ++m) {
            const double f = machines_[m].decision(row);
            const int winner = (f >= 0.0) ? pairs_[m].first : pairs_[m].second;
            votes[static_cast<std::size_t>(winner)]++;
            margin[static_cast<std::size_t>(winner)] += std::abs(f);
        }
        int best = classes_.front();
        for (int c : classes_) {
            const auto ci = static_cast<std::size_t>(c);
            const auto bi = static_cast<std::size_t>(best);
            if (votes[ci] > votes[bi] || (votes[ci] == votes[bi] && margin[ci] > margin[bi]))
                best = c;
        }
        return best;
    }

    const std::string& name() const override { return spec_.name; }

  private:
    ModelSpec spec_;
    std::uint64_t seed_;
    bool fitted_ = false;
    std::vector<int> classes_;
    std::vector<BinarySvm> machines_;
    std::vector<std::pair<int, int>> pairs_;
};

}  // namespace

std::unique_ptr<Classifier> make_svm(const ModelSpec& spec, std::uint64_t seed) {
    return std::make_unique<SvmClassifier>(spec, seed);
}

}  // namespace ppg::ml

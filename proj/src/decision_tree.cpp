#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ppgmotion/classify.hpp"

// CART with Gini impurity. Thresholds are midpoints between consecutive
// distinct values; ties prefer the lowest feature index and threshold.

namespace ppg::ml {

namespace {

struct Node {
    bool leaf = true;
    int label = 0;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::unique_ptr<Node> left, right;
};

double gini(const std::array<std::size_t, kNumClasses>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

int majority(const std::array<std::size_t, kNumClasses>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

class TreeClassifier final : public Classifier {
  public:
    explicit TreeClassifier(ModelSpec spec) : spec_(std::move(spec)) {
        if (spec_.tree_max_depth < 1 || spec_.tree_min_leaf < 1)
            throw std::invalid_argument("decision_tree: bad depth/leaf parameters");
    }

    void fit(const Dataset& train) override {
        if (train.rows() == 0) throw std::invalid_argument("decision_tree: empty training set");
        data_ = &train;
        std::vector<std::size_t> idx(train.rows());
        std::iota(idx.begin(), idx.end(), 0);
        root_ = build(idx, 0);
        data_ = nullptr;
        fitted_ = true;
    }

    int predict(const std::vector<double>& row) const override {
        if (!fitted_) throw std::logic_error("decision_tree: predict called before fit");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("decision_tree: non-finite feature");
        const Node* node = root_.get();
        while (!node->leaf)
            node = (row[node->feature] <= node->threshold) ? node->left.get() : node->right.get();
        return node->label;
    }

    const std::string& name() const override { return spec_.name; }

  private:
    std::unique_ptr<Node> build(const std::vector<std::size_t>& idx, int depth) {
        std::array<std::size_t, kNumClasses> counts{};
        for (std::size_t i : idx) counts[static_cast<std::size_t>(data_->y[i])]++;
        auto node = std::make_unique<Node>();
        node->label = majority(counts);

        const double parent_gini = gini(counts, idx.size());
        if (depth >= spec_.tree_max_depth || parent_gini == 0.0 ||
            idx.size() < 2 * static_cast<std::size_t>(spec_.tree_min_leaf))
            return node;

        const std::size_t min_leaf = static_cast<std::size_t>(spec_.tree_min_leaf);
        double best_score = parent_gini;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;

        std::vector<std::size_t> order(idx);
        for (std::size_t f = 0; f < data_->cols(); ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return data_->x[a][f] < data_->x[b][f];
            });
            std::array<std::size_t, kNumClasses> left_counts{};
            auto right_counts = counts;
            for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
                const auto c = static_cast<std::size_t>(data_->y[order[pos]]);
                left_counts[c]++;
                right_counts[c]--;
                const double lo = data_->x[order[pos]][f];
                const double hi = data_->x[order[pos + 1]][f];
                if (lo == hi) continue;
                const std::size_t n_left = pos + 1;
                const std::size_t n_right = order.size() - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                const double score =
                    (static_cast<double>(n_left) * gini(left_counts, n_left) +
                     static_cast<double>(n_right) * gini(right_counts, n_right)) /
                    static_cast<double>(order.size());
                if (score < best_score - 1e-12) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = 0.5 * (lo + hi);
                    found = true;
                }
            }
        }
        if (!found) return node;

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx)
            (data_->x[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
        node->leaf = false;
        node->feature = best_feature;
        node->threshold = best_threshold;
        node->left = build(left_idx, depth + 1);
        node->right = build(right_idx, depth + 1);
        return node;
    }

    ModelSpec spec_;
    bool fitted_ = false;
    const Dataset* data_ = nullptr;
    std::unique_ptr<Node> root_;
};

}  // namespace

std::unique_ptr<Classifier> make_decision_tree(const ModelSpec& spec) {
    return std::make_unique<TreeClassifier>(spec);
}

}  // namespace ppg::ml

// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/regress/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/parallel.hpp"
#include "pyrorisk/common/rng.hpp"

namespace pyrorisk::regress {

std::string kind_name(const RegressorKind& kind) {
    return std::holds_alternative<KnnParams>(kind) ? "KNN" : "RF";
}

double RegressionTree::predict(std::span<const double> row) const {
    int i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        i = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[i].value;
}

std::size_t RegressionTree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes_[i].feature >= 0) {
            stack.emplace_back(nodes_[i].left, d + 1);
            stack.emplace_back(nodes_[i].right, d + 1);
        }
    }
    return deepest;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const double> y, const RandomForestParams& p, std::size_t max_features,
                std::uint64_t seed)
        : x_(x), y_(y), params_(p), max_features_(max_features), rng_(seed) {}

    RegressionTree build(std::vector<std::size_t> samples) {
        RegressionTree tree;
        nodes_ = &tree.nodes_;
        grow(samples, 0);
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double sse = std::numeric_limits<double>::infinity();
    };

    static double mean_of(std::span<const double> y, std::span<const std::size_t> idx) {
        double s = 0.0;
        for (auto i : idx) s += y[i];
        return s / static_cast<double>(idx.size());
    }

    // Best variance-reduction split on one feature, or sse = inf if none
    // satisfies min_leaf.
    Split best_on_feature(std::size_t f, std::vector<std::size_t>& idx) const {
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x_.at(a, f) < x_.at(b, f); });
        const std::size_t n = idx.size();
        double total = 0.0, total_sq = 0.0;
        for (auto i : idx) {
            total += y_[i];
            total_sq += y_[i] * y_[i];
        }
        Split best;
        double left = 0.0, left_sq = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double yv = y_[idx[k - 1]];
            left += yv;
            left_sq += yv * yv;
            if (k < params_.min_leaf || n - k < params_.min_leaf) continue;
            const double a = x_.at(idx[k - 1], f);
            const double b = x_.at(idx[k], f);
            if (!(a < b)) continue;
            const double nl = static_cast<double>(k);
            const double nr = static_cast<double>(n - k);
            const double right = total - left;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left * left / nl) + (right_sq - right * right / nr);
            if (sse < best.sse) {
                double t = 0.5 * (a + b);
                if (!(t < b)) t = a;
                best = {static_cast<int>(f), t, sse};
            }
        }
        return best;
    }

    int grow(std::vector<std::size_t>& idx, std::size_t depth) {
        const int id = static_cast<int>(nodes_->size());
        nodes_->push_back({});
        (*nodes_)[id].value = mean_of(y_, idx);

        const bool depth_left = params_.max_depth == 0 || depth < params_.max_depth;
        const bool pure = std::all_of(idx.begin(), idx.end(), [&](auto i) { return y_[i] == y_[idx[0]]; });
        if (!depth_left || pure || idx.size() < 2 * params_.min_leaf) return id;

        std::vector<std::size_t> features(x_.cols);
        std::iota(features.begin(), features.end(), std::size_t{0});
        rng_.shuffle(std::span(features));

        Split best;
        std::vector<std::size_t> scratch = idx;
        for (std::size_t k = 0; k < features.size(); ++k) {
            // Sampled features first; fall back to the rest only when none of
            // them admits a split.
            if (k >= max_features_ && best.feature >= 0) break;
            const auto s = best_on_feature(features[k], scratch);
            if (s.sse < best.sse) best = s;
        }
        if (best.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto i : idx) {
            (x_.at(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(i);
        }
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        auto& node = (*nodes_)[id];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    const Matrix& x_;
    std::span<const double> y_;
    RandomForestParams params_;
    std::size_t max_features_;
    Rng rng_;
    std::vector<RegressionTree::Node>* nodes_ = nullptr;
};

RegressorModel fit(const RegressorKind& kind, const ScaledFeatures& x, std::span<const double> y) {
    const auto& m = x.values();
    if (m.rows == 0) throw DomainError("train", "no training rows");
    if (y.size() != m.rows) throw DomainError("target", "length differs from training rows");
    for (double v : y) {
        if (!std::isfinite(v)) throw DomainError("target", "non-finite value");
    }

    RegressorModel model;
    model.kind_ = kind;
    model.scaler_ = x.scaler();

    if (const auto* knn = std::get_if<KnnParams>(&kind)) {
        if (knn->k < 1 || knn->k > m.rows) throw DomainError("k", "must satisfy 1 <= k <= N");
        model.train_x_ = m;
        model.train_y_.assign(y.begin(), y.end());
        return model;
    }

    const auto& rf = std::get<RandomForestParams>(kind);
    if (rf.n_trees < 1) throw DomainError("n_trees", "must be >= 1");
    if (rf.min_leaf < 1) throw DomainError("min_leaf", "must be >= 1");
    const std::size_t max_features =
        rf.max_features ? std::min(rf.max_features, m.cols) : (m.cols + 2) / 3;

    model.trees_.resize(rf.n_trees);
    parallel_for(rf.n_trees, [&](std::size_t t) {
        Rng sampler(derive_seed(rf.seed, 2 * t));
        std::vector<std::size_t> samples(m.rows);
        if (rf.bootstrap) {
            for (auto& s : samples) s = static_cast<std::size_t>(sampler.below(m.rows));
        } else {
            std::iota(samples.begin(), samples.end(), std::size_t{0});
        }
        TreeBuilder builder(m, y, rf, max_features, derive_seed(rf.seed, 2 * t + 1));
        model.trees_[t] = builder.build(std::move(samples));
    });
    return model;
}

RegressorModel fit(const RegressorKind& kind, const Standardized& train, std::string_view target) {
    const auto y = train.data.target(target);
    return fit(kind, train.features(), y);
}

namespace {

void check_rows(const RegressorModel& model, const ScaledFeatures& rows) {
    if (rows.values().cols != model.feature_count()) throw DomainError("features", "column count differs from training");
    if (!(rows.scaler() == model.scaler())) {
        throw DomainError("features", "rows were scaled with different parameters than the model");
    }
}

double knn_predict(const Matrix& train, std::span<const double> y, std::size_t k, std::span<const double> q) {
    // Max-heap on (distance, index) keeps the k best; the pair ordering
    // prefers the lower index among equal distances.
    std::priority_queue<std::pair<double, std::size_t>> best;
    for (std::size_t r = 0; r < train.rows; ++r) {
        const auto row = train.row(r);
        double d = 0.0;
        for (std::size_t c = 0; c < q.size(); ++c) {
            const double diff = row[c] - q[c];
            d += diff * diff;
        }
        if (best.size() < k) {
            best.emplace(d, r);
        } else if (std::pair{d, r} < best.top()) {
            best.pop();
            best.emplace(d, r);
        }
    }
    double sum = 0.0;
    while (!best.empty()) {
        sum += y[best.top().second];
        best.pop();
    }
    return sum / static_cast<double>(k);
}

}  // namespace

std::vector<double> predict(const RegressorModel& model, const ScaledFeatures& rows) {
    check_rows(model, rows);
    const auto& q = rows.values();
    std::vector<double> out(q.rows);
    if (const auto* knn = std::get_if<KnnParams>(&model.kind_)) {
        parallel_for(q.rows, [&](std::size_t r) { out[r] = knn_predict(model.train_x_, model.train_y_, knn->k, q.row(r)); });
        return out;
    }
    for (std::size_t r = 0; r < q.rows; ++r) {
        double s = 0.0;
        for (const auto& tree : model.trees_) s += tree.predict(q.row(r));
        out[r] = s / static_cast<double>(model.trees_.size());
    }
    return out;
}

std::vector<std::vector<double>> per_tree_predictions(const RegressorModel& model, const ScaledFeatures& rows) {
    check_rows(model, rows);
    std::vector<std::vector<double>> out;
    for (const auto& tree : model.trees()) {
        std::vector<double> p(rows.values().rows);
        for (std::size_t r = 0; r < p.size(); ++r) p[r] = tree.predict(rows.values().row(r));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace pyrorisk::regress

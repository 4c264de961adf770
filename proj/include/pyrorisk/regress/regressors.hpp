// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pyrorisk/regress/tabular.hpp"

namespace pyrorisk::regress {

/// k-nearest-neighbour regression: Euclidean distance on standardised
/// features, uniform average of the k closest targets, ties broken by the
/// lower training row index.
struct KnnParams {
    std::size_t k = 5;
};

/// CART regression forest with variance-reduction splits.
struct RandomForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;     // 0 = unlimited
    std::size_t min_leaf = 1;
    std::size_t max_features = 0;  // 0 = ceil(F / 3)
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

using RegressorKind = std::variant<KnnParams, RandomForestParams>;

std::string kind_name(const RegressorKind& kind);

/// One fitted CART tree stored as a flat node array; node 0 is the root.
class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    double predict(std::span<const double> row) const;
    std::size_t depth() const;
    std::size_t leaf_count() const;
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
    friend class TreeBuilder;
};

/// A fitted model, immutable after fit and safe to share between readers.
class RegressorModel {
public:
    const RegressorKind& kind() const { return kind_; }
    const ScalerParams& scaler() const { return scaler_; }
    std::size_t feature_count() const { return scaler_.means.size(); }

    /// Forest members; empty for KNN.
    const std::vector<RegressionTree>& trees() const { return trees_; }

private:
    RegressorKind kind_;
    ScalerParams scaler_;
    Matrix train_x_;
    std::vector<double> train_y_;
    std::vector<RegressionTree> trees_;

    friend RegressorModel fit(const RegressorKind&, const ScaledFeatures&, std::span<const double>);
    friend std::vector<double> predict(const RegressorModel&, const ScaledFeatures&);
};

RegressorModel fit(const RegressorKind& kind, const ScaledFeatures& x, std::span<const double> y);

/// Convenience: fits on a standardised dataset using one target column.
RegressorModel fit(const RegressorKind& kind, const Standardized& train, std::string_view target);

/// Rows must carry the same ScalerParams the model was fitted with.
std::vector<double> predict(const RegressorModel& model, const ScaledFeatures& rows);

/// Each tree's prediction for every row: result[t][r]. Empty for KNN.
std::vector<std::vector<double>> per_tree_predictions(const RegressorModel& model, const ScaledFeatures& rows);

}  // namespace pyrorisk::regress

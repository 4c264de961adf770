// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pyrorisk::regress {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
    std::vector<double> column(std::size_t c) const;

    bool operator==(const Matrix&) const = default;
};

/// Feature matrix (N x F) and target matrix (N x T) with named columns.
struct TabularDataset {
    Matrix features;
    std::vector<std::string> feature_names;
    Matrix targets;
    std::vector<std::string> target_names;
    std::vector<std::string> row_ids;

    std::size_t size() const { return features.rows; }

    /// Shape, finiteness and name-uniqueness checks; throws DomainError.
    void validate() const;

    std::vector<double> target(std::string_view name) const;
    std::size_t target_index(std::string_view name) const;

    TabularDataset subset(std::span<const std::size_t> rows) const;
};

/// Per-feature standardisation parameters (population standard deviation).
/// Columns whose deviation is zero are flagged constant and map to 0.
struct ScalerParams {
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<bool> constant;

    bool operator==(const ScalerParams&) const = default;
};

/// Features that have been passed through a specific ScalerParams. Only
/// produced by standardize() and transform(), so models can refuse rows
/// that were never scaled or were scaled with someone else's parameters.
class ScaledFeatures {
public:
    const Matrix& values() const { return values_; }
    const ScalerParams& scaler() const { return scaler_; }

private:
    ScaledFeatures(Matrix values, ScalerParams scaler) : values_(std::move(values)), scaler_(std::move(scaler)) {}

    Matrix values_;
    ScalerParams scaler_;

    friend ScaledFeatures transform(const ScalerParams&, const Matrix&);
    friend struct Standardized;
};

struct Standardized {
    TabularDataset data;  // features replaced by their standardised values
    ScalerParams scaler;

    ScaledFeatures features() const;
};

/// Fits ScalerParams on `data` and returns the standardised copy. Requires
/// at least two rows.
Standardized standardize(const TabularDataset& data);

ScaledFeatures transform(const ScalerParams& scaler, const Matrix& raw);
Matrix inverse_transform(const ScaledFeatures& scaled);

/// Seeded shuffle then split; the first ceil(N * test_fraction) shuffled
/// rows form the test set.
std::pair<TabularDataset, TabularDataset> train_test_split(const TabularDataset& data, double test_fraction,
                                                           std::uint64_t seed);

/// Reads a numeric CSV. Target columns are required. When `features` is
/// empty every remaining column except `id_column` becomes a feature. The
/// id column, if present, fills row_ids.
TabularDataset read_tabular(std::istream& in, std::span<const std::string> targets,
                            std::span<const std::string> features = {}, std::string_view id_column = "date");
TabularDataset read_tabular_file(const std::string& path, std::span<const std::string> targets,
                                 std::span<const std::string> features = {}, std::string_view id_column = "date");

}  // namespace pyrorisk::regress

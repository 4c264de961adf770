// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pyrorisk/regress/regressors.hpp"
#include "pyrorisk/regress/tabular.hpp"

namespace pyrorisk::regress {

/// Mean absolute error, (1/N) * sum |y_i - yhat_i|.
double mae(std::span<const double> y, std::span<const double> yhat);

/// Pearson coefficients over the feature columns (and targets when asked).
/// Entries involving a zero-variance column are std::nullopt.
struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::optional<double>> values;  // names.size()^2, row-major

    std::optional<double> at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

CorrelationMatrix correlation_matrix(const TabularDataset& data, bool include_targets);

/// Regressor x target table of MAE values.
struct MaeTable {
    std::vector<std::string> regressors;
    std::vector<std::string> targets;
    Matrix values;  // regressors.size() x targets.size()

    double at(std::size_t regressor, std::size_t target) const { return values.at(regressor, target); }
};

/// One fitted model per target for a named regressor.
struct RegressorSet {
    std::string name;
    std::map<std::string, RegressorModel, std::less<>> models;
};

/// Scores every set on raw (unscaled) test data; each model applies the
/// ScalerParams it was fitted with.
MaeTable evaluate(std::span<const RegressorSet> sets, const TabularDataset& test, std::span<const std::string> targets);

/// Default target columns, one per MAE table column.
inline const std::vector<std::string> kDefaultTargets{"ffmc", "dmc", "dc", "isi"};

struct ExperimentConfig {
    std::vector<std::pair<std::string, RegressorKind>> regressors{{"RF", RandomForestParams{}}, {"KNN", KnnParams{}}};
    std::vector<std::string> targets = kDefaultTargets;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

/// Split, standardise on the training part, fit every regressor per target
/// and evaluate on the held-out part.
MaeTable run_experiment(const TabularDataset& data, const ExperimentConfig& cfg);

/// `regressor,<target>_mae,...`, values with 4 decimals.
void write_mae_csv(std::ostream& out, const MaeTable& table);
/// Square matrix with a leading name column; undefined entries written as NA.
void write_correlation_csv(std::ostream& out, const CorrelationMatrix& corr);

}  // namespace pyrorisk::regress

// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/regress/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/rng.hpp"

namespace pyrorisk::regress {

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
}

void TabularDataset::validate() const {
    if (features.rows == 0) throw DomainError("features", "dataset has no rows");
    if (features.data.size() != features.rows * features.cols) throw DomainError("features", "storage size mismatch");
    if (targets.data.size() != targets.rows * targets.cols) throw DomainError("targets", "storage size mismatch");
    if (feature_names.size() != features.cols) throw DomainError("feature_names", "count differs from feature columns");
    if (target_names.size() != targets.cols) throw DomainError("target_names", "count differs from target columns");
    if (targets.cols > 0 && targets.rows != features.rows) throw DomainError("targets", "row count differs from features");
    if (!row_ids.empty() && row_ids.size() != features.rows) throw DomainError("row_ids", "count differs from rows");
    std::set<std::string> names;
    for (const auto& n : feature_names) {
        if (!names.insert(n).second) throw DomainError(n, "duplicate column name");
    }
    for (const auto& n : target_names) {
        if (!names.insert(n).second) throw DomainError(n, "duplicate column name");
    }
    for (double v : features.data) {
        if (!std::isfinite(v)) throw DomainError("features", "non-finite value");
    }
    for (double v : targets.data) {
        if (!std::isfinite(v)) throw DomainError("targets", "non-finite value");
    }
}

std::size_t TabularDataset::target_index(std::string_view name) const {
    const auto it = std::find(target_names.begin(), target_names.end(), name);
    if (it == target_names.end()) throw DomainError(std::string(name), "missing target column");
    return static_cast<std::size_t>(it - target_names.begin());
}

std::vector<double> TabularDataset::target(std::string_view name) const { return targets.column(target_index(name)); }

TabularDataset TabularDataset::subset(std::span<const std::size_t> rows) const {
    TabularDataset out;
    out.feature_names = feature_names;
    out.target_names = target_names;
    out.features = Matrix(rows.size(), features.cols);
    out.targets = Matrix(targets.cols ? rows.size() : 0, targets.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = rows[i];
        if (r >= features.rows) throw DomainError("rows", "index out of range");
        std::copy_n(features.row(r).begin(), features.cols, out.features.data.begin() + i * features.cols);
        if (targets.cols) std::copy_n(targets.row(r).begin(), targets.cols, out.targets.data.begin() + i * targets.cols);
        if (!row_ids.empty()) out.row_ids.push_back(row_ids[r]);
    }
    return out;
}

ScaledFeatures Standardized::features() const { return ScaledFeatures(data.features, scaler); }

Standardized standardize(const TabularDataset& data) {
    data.validate();
    if (data.size() < 2) throw DomainError("features", "standardize needs at least 2 rows");
    const auto n = static_cast<double>(data.size());
    const auto f = data.features.cols;
    ScalerParams params;
    params.means.assign(f, 0.0);
    params.stds.assign(f, 0.0);
    params.constant.assign(f, false);
    for (std::size_t c = 0; c < f; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < data.size(); ++r) sum += data.features.at(r, c);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t r = 0; r < data.size(); ++r) {
            const double d = data.features.at(r, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / n);
        params.means[c] = mean;
        params.stds[c] = sd;
        params.constant[c] = sd <= 1e-12 * std::max(1.0, std::abs(mean));
    }
    Standardized out{data, params};
    out.data.features = transform(params, data.features).values();
    return out;
}

ScaledFeatures transform(const ScalerParams& scaler, const Matrix& raw) {
    if (raw.cols != scaler.means.size()) throw DomainError("features", "column count differs from scaler");
    Matrix z(raw.rows, raw.cols);
    for (std::size_t r = 0; r < raw.rows; ++r) {
        for (std::size_t c = 0; c < raw.cols; ++c) {
            z.at(r, c) = scaler.constant[c] ? 0.0 : (raw.at(r, c) - scaler.means[c]) / scaler.stds[c];
        }
    }
    return ScaledFeatures(std::move(z), scaler);
}

Matrix inverse_transform(const ScaledFeatures& scaled) {
    const auto& z = scaled.values();
    const auto& s = scaled.scaler();
    Matrix raw(z.rows, z.cols);
    for (std::size_t r = 0; r < z.rows; ++r) {
        for (std::size_t c = 0; c < z.cols; ++c) {
            raw.at(r, c) = s.constant[c] ? s.means[c] : z.at(r, c) * s.stds[c] + s.means[c];
        }
    }
    return raw;
}

std::pair<TabularDataset, TabularDataset> train_test_split(const TabularDataset& data, double test_fraction,
                                                           std::uint64_t seed) {
    data.validate();
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw DomainError("test_fraction", "must be in (0, 1)");
    if (data.size() < 2) throw DomainError("features", "need at least 2 rows to split");
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span(order));
    auto n_test = static_cast<std::size_t>(std::ceil(static_cast<double>(data.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, data.size() - 1);
    const std::span<const std::size_t> all(order);
    return {data.subset(all.subspan(n_test)), data.subset(all.first(n_test))};
}

TabularDataset read_tabular(std::istream& in, std::span<const std::string> targets,
                            std::span<const std::string> features, std::string_view id_column) {
    const auto table = csv::read(in);
    if (targets.empty()) throw DomainError("targets", "at least one target column required");
    std::vector<std::size_t> target_cols, feature_cols;
    for (const auto& t : targets) target_cols.push_back(table.column(t));
    TabularDataset d;
    d.target_names.assign(targets.begin(), targets.end());
    if (features.empty()) {
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            const auto& name = table.header[c];
            if (name == id_column) continue;
            if (std::find(targets.begin(), targets.end(), name) != targets.end()) continue;
            feature_cols.push_back(c);
            d.feature_names.push_back(name);
        }
    } else {
        for (const auto& f : features) {
            if (std::find(targets.begin(), targets.end(), f) != targets.end()) {
                throw DomainError(f, "column used as both feature and target");
            }
            feature_cols.push_back(table.column(f));
            d.feature_names.push_back(f);
        }
    }
    if (feature_cols.empty()) throw DomainError("features", "no feature columns");
    const bool has_id = !id_column.empty() && table.has_column(id_column);
    const std::size_t id_col = has_id ? table.column(id_column) : 0;
    const std::size_t n = table.rows.size();
    d.features = Matrix(n, feature_cols.size());
    d.targets = Matrix(n, target_cols.size());
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            d.features.at(r, j) = csv::to_double(row[feature_cols[j]], d.feature_names[j]);
        }
        for (std::size_t j = 0; j < target_cols.size(); ++j) {
            d.targets.at(r, j) = csv::to_double(row[target_cols[j]], d.target_names[j]);
        }
        d.row_ids.push_back(has_id ? row[id_col] : std::to_string(r));
    }
    d.validate();
    return d;
}

TabularDataset read_tabular_file(const std::string& path, std::span<const std::string> targets,
                                 std::span<const std::string> features, std::string_view id_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_tabular(in, targets, features, id_column);
}

}  // namespace pyrorisk::regress

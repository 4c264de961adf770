// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/regress/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::regress {

double mae(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw DomainError("yhat", "length differs from y");
    if (y.empty()) throw DomainError("y", "must be non-empty");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - yhat[i]);
    return s / static_cast<double>(y.size());
}

CorrelationMatrix correlation_matrix(const TabularDataset& data, bool include_targets) {
    data.validate();
    if (data.size() < 2) throw DomainError("features", "correlation needs at least 2 rows");
    CorrelationMatrix out;
    std::vector<std::vector<double>> columns;
    for (std::size_t c = 0; c < data.features.cols; ++c) {
        out.names.push_back(data.feature_names[c]);
        columns.push_back(data.features.column(c));
    }
    if (include_targets) {
        for (std::size_t c = 0; c < data.targets.cols; ++c) {
            out.names.push_back(data.target_names[c]);
            columns.push_back(data.targets.column(c));
        }
    }
    const std::size_t k = columns.size();
    const auto n = static_cast<double>(data.size());
    std::vector<std::vector<double>> centred(k);
    std::vector<double> norms(k);
    for (std::size_t i = 0; i < k; ++i) {
        double mean = 0.0;
        for (double v : columns[i]) mean += v;
        mean /= n;
        centred[i].reserve(columns[i].size());
        double ss = 0.0;
        for (double v : columns[i]) {
            centred[i].push_back(v - mean);
            ss += (v - mean) * (v - mean);
        }
        norms[i] = std::sqrt(ss);
    }
    out.values.assign(k * k, std::nullopt);
    for (std::size_t i = 0; i < k; ++i) {
        const bool flat_i = norms[i] <= 1e-12 * std::max(1.0, std::abs(columns[i][0]));
        for (std::size_t j = i; j < k; ++j) {
            const bool flat_j = norms[j] <= 1e-12 * std::max(1.0, std::abs(columns[j][0]));
            if (flat_i || flat_j) continue;
            double r = 1.0;
            if (i != j) {
                double dot = 0.0;
                for (std::size_t t = 0; t < centred[i].size(); ++t) dot += centred[i][t] * centred[j][t];
                r = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
            }
            out.values[i * k + j] = r;
            out.values[j * k + i] = r;
        }
    }
    return out;
}

MaeTable evaluate(std::span<const RegressorSet> sets, const TabularDataset& test, std::span<const std::string> targets) {
    test.validate();
    MaeTable table;
    table.targets.assign(targets.begin(), targets.end());
    table.values = Matrix(sets.size(), targets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
        table.regressors.push_back(sets[s].name);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const auto y = test.target(targets[t]);
            const auto it = sets[s].models.find(targets[t]);
            if (it == sets[s].models.end()) throw DomainError(targets[t], "no model for target in set " + sets[s].name);
            const auto& model = it->second;
            const auto yhat = predict(model, transform(model.scaler(), test.features));
            table.values.at(s, t) = mae(y, yhat);
        }
    }
    return table;
}

MaeTable run_experiment(const TabularDataset& data, const ExperimentConfig& cfg) {
    for (const auto& t : cfg.targets) data.target_index(t);
    auto [train, test] = train_test_split(data, cfg.test_fraction, cfg.seed);
    const auto scaled = standardize(train);
    std::vector<RegressorSet> sets;
    for (const auto& [name, kind] : cfg.regressors) {
        RegressorSet set{name, {}};
        for (const auto& target : cfg.targets) set.models.emplace(target, fit(kind, scaled, target));
        sets.push_back(std::move(set));
    }
    return evaluate(sets, test, cfg.targets);
}

void write_mae_csv(std::ostream& out, const MaeTable& table) {
    out << "regressor";
    for (const auto& t : table.targets) out << ',' << t << "_mae";
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < table.regressors.size(); ++r) {
        out << table.regressors[r];
        for (std::size_t t = 0; t < table.targets.size(); ++t) {
            std::snprintf(buf, sizeof buf, ",%.4f", table.at(r, t));
            out << buf;
        }
        out << '\n';
    }
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& corr) {
    out << "name";
    for (const auto& n : corr.names) out << ',' << n;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < corr.names.size(); ++i) {
        out << corr.names[i];
        for (std::size_t j = 0; j < corr.names.size(); ++j) {
            if (const auto v = corr.at(i, j)) {
                std::snprintf(buf, sizeof buf, ",%.6f", *v);
                out << buf;
            } else {
                out << ",NA";
            }
        }
        out << '\n';
    }
}

}  // namespace pyrorisk::regress

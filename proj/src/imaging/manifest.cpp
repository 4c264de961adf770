// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/imaging/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "pyrorisk/common/csv.hpp"
#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/rng.hpp"

namespace pyrorisk::imaging {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool is_image_file(const std::filesystem::path& p) {
    const auto ext = lower(p.extension().string());
    return ext == ".png";
}

std::size_t floor_count(std::size_t n, double f) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
}

}  // namespace

std::string_view to_string(Label label) { return label == Label::Wildfire ? "wildfire" : "nowildfire"; }

std::string_view to_string(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Test: return "test";
        case Split::Val: return "val";
    }
    return "train";
}

Label parse_label(std::string_view text) {
    const auto s = lower(text);
    if (s == "wildfire") return Label::Wildfire;
    if (s == "nowildfire") return Label::NoWildfire;
    throw DomainError("label", "unknown label '" + std::string(text) + "'");
}

Split parse_split(std::string_view text) {
    const auto s = lower(text);
    if (s == "train") return Split::Train;
    if (s == "test") return Split::Test;
    if (s == "val") return Split::Val;
    throw DomainError("split", "unknown split '" + std::string(text) + "'");
}

std::array<std::size_t, 2> DatasetManifest::class_counts() const {
    std::array<std::size_t, 2> c{};
    for (const auto& e : entries) ++c[static_cast<std::size_t>(e.label)];
    return c;
}

std::array<std::size_t, 3> DatasetManifest::split_counts() const {
    std::array<std::size_t, 3> c{};
    for (const auto& e : entries) ++c[static_cast<std::size_t>(e.split)];
    return c;
}

std::size_t DatasetManifest::count(Split split, Label label) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [&](const auto& e) { return e.split == split && e.label == label; }));
}

std::vector<ManifestEntry> DatasetManifest::select(Split split) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
        if (e.split == split) out.push_back(e);
    }
    return out;
}

void DatasetManifest::validate() const {
    std::set<std::string_view> seen;
    for (const auto& e : entries) {
        if (e.path.empty()) throw DomainError("path", "empty manifest path");
        if (!seen.insert(e.path).second) throw DomainError("path", "duplicate manifest entry '" + e.path + "'");
    }
}

DatasetManifest split_dataset(std::vector<LabeledPath> entries, SplitFractions f, std::uint64_t seed) {
    if (entries.empty()) throw DomainError("entries", "empty entry list");
    for (double v : {f.train, f.test, f.val}) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("fractions", "each fraction must be in [0, 1]");
    }
    if (std::abs(f.train + f.test + f.val - 1.0) > 1e-9) throw DomainError("fractions", "must sum to 1");

    DatasetManifest out;
    out.entries.reserve(entries.size());
    for (Label label : {Label::Wildfire, Label::NoWildfire}) {
        std::vector<std::string> paths;
        for (auto& e : entries) {
            if (e.label == label) paths.push_back(std::move(e.path));
        }
        std::sort(paths.begin(), paths.end());
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
        rng.shuffle(std::span<std::string>(paths));

        const std::size_t n = paths.size();
        const std::size_t n_test = floor_count(n, f.test);
        const std::size_t n_val = floor_count(n, f.val);
        const std::size_t n_train = n - n_test - n_val;
        for (std::size_t i = 0; i < n; ++i) {
            const Split s = i < n_train ? Split::Train : (i < n_train + n_test ? Split::Test : Split::Val);
            out.entries.push_back({std::move(paths[i]), label, s});
        }
    }
    out.validate();
    return out;
}

std::vector<LabeledPath> scan_dataset(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw DomainError("dataset", "not a directory: " + root.string());
    std::vector<LabeledPath> out;
    bool any_dir = false;
    for (Label label : {Label::Wildfire, Label::NoWildfire}) {
        const fs::path dir = root / std::string(to_string(label));
        if (!fs::is_directory(dir)) continue;
        any_dir = true;
        for (const auto& de : fs::recursive_directory_iterator(dir)) {
            if (!de.is_regular_file() || !is_image_file(de.path())) continue;
            out.push_back({fs::relative(de.path(), root).generic_string(), label});
        }
    }
    if (!any_dir) throw DomainError("dataset", "no wildfire/ or nowildfire/ directory under " + root.string());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return out;
}

void write_manifest(std::ostream& out, const DatasetManifest& manifest) {
    out << "path,label,split\n";
    for (const auto& e : manifest.entries) {
        if (e.path.find_first_of(",\"\n\r") != std::string::npos) {
            throw DomainError("path", "unsupported character in '" + e.path + "'");
        }
        out << e.path << ',' << to_string(e.label) << ',' << to_string(e.split) << '\n';
    }
}

DatasetManifest read_manifest(std::istream& in) {
    const auto table = csv::read(in);
    const auto path_col = table.column("path");
    const auto label_col = table.column("label");
    const auto split_col = table.column("split");
    DatasetManifest m;
    m.entries.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        m.entries.push_back({row[path_col], parse_label(row[label_col]), parse_split(row[split_col])});
    }
    m.validate();
    return m;
}

void write_manifest_file(const std::string& path, const DatasetManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_manifest(out, manifest);
    if (!out) throw std::runtime_error("write failed: " + path);
}

DatasetManifest read_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_manifest(in);
}

}  // namespace pyrorisk::imaging

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pyrorisk::imaging {

enum class Label : std::uint8_t { Wildfire, NoWildfire };
enum class Split : std::uint8_t { Train, Test, Val };

std::string_view to_string(Label label);
std::string_view to_string(Split split);
/// "wildfire" / "nowildfire", case-insensitive.
Label parse_label(std::string_view text);
/// "train" / "test" / "val", case-insensitive.
Split parse_split(std::string_view text);

struct ManifestEntry {
    std::string path;
    Label label = Label::Wildfire;
    Split split = Split::Train;

    bool operator==(const ManifestEntry&) const = default;
};

struct LabeledPath {
    std::string path;
    Label label = Label::Wildfire;
};

struct SplitFractions {
    double train = 0.70;
    double test = 0.15;
    double val = 0.15;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    /// Indexed by Label.
    std::array<std::size_t, 2> class_counts() const;
    /// Indexed by Split.
    std::array<std::size_t, 3> split_counts() const;
    std::size_t count(Split split, Label label) const;
    std::vector<ManifestEntry> select(Split split) const;
    /// Throws DomainError on duplicate paths.
    void validate() const;
};

/// Stratified per class. Within each class, entries are sorted by path,
/// shuffled with a seeded generator, then assigned contiguously:
/// test = floor(n * f_test), val = floor(n * f_val), train gets the rest.
/// Output is ordered by class, then split (train, test, val), then shuffle
/// order.
DatasetManifest split_dataset(std::vector<LabeledPath> entries, SplitFractions fractions = {},
                              std::uint64_t seed = 0);

/// Lists image files under root/wildfire and root/nowildfire. Paths are
/// relative to root with forward slashes, sorted.
std::vector<LabeledPath> scan_dataset(const std::filesystem::path& root);

/// CSV with header `path,label,split`.
void write_manifest(std::ostream& out, const DatasetManifest& manifest);
DatasetManifest read_manifest(std::istream& in);
void write_manifest_file(const std::string& path, const DatasetManifest& manifest);
DatasetManifest read_manifest_file(const std::string& path);

}  // namespace pyrorisk::imaging

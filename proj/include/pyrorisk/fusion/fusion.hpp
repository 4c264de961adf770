// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pyrorisk/cnn/network.hpp"
#include "pyrorisk/fwi/fwi.hpp"

namespace pyrorisk::fusion {

/// Danger classes 0 (negligible) .. 5 (extreme).
inline constexpr int kMaxLevel = 5;

/// Defaults are the EFFIS breakpoints. Class k covers [t[k-1], t[k]), so a
/// value equal to a threshold lands in the higher class.
inline constexpr std::array<double, 5> kDefaultThresholds{5.2, 11.2, 21.3, 38.0, 50.0};

struct FusionConfig {
    std::array<double, 5> thresholds = kDefaultThresholds;
    double gamma = 1.0;  // attenuation exponent, > 0
    double tau = 0.0;    // burn probabilities below tau leave the base level untouched

    /// Throws DomainError on non-ascending thresholds, gamma <= 0 or tau
    /// outside [0, 1].
    void validate() const;
};

/// Parses "a,b,c,d,e".
std::array<double, 5> parse_thresholds(std::string_view text);

struct DangerLevel {
    int level = 0;
    int base_level = 0;
    double p_burn = 0.0;
    std::optional<int> severity;
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    bool operator==(const DangerLevel&) const = default;
};

int fwi_to_danger(double fwi, const FusionConfig& cfg = {});

/// level = round(base * (1 - p)^gamma) when p >= tau, else base.
/// Rounding is half away from zero.
DangerLevel fuse_binary(int base, double p_burn, const FusionConfig& cfg = {});

/// level = round(base * (1 - severity / 5)).
DangerLevel fuse_severity(int base, int severity, const FusionConfig& cfg = {});

/// Burn probability read from a classifier output. `burn_class` selects the
/// output unit; default is unit 1 for two-unit heads (labels sorted
/// nowildfire, wildfire) and unit 0 for single-unit heads.
double burn_probability(const cnn::ClassScores& scores, std::optional<std::size_t> burn_class = std::nullopt);

struct TileScore {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double p_burn = 0.0;
};

struct DangerMap {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    int base_level = 0;
    double fwi = 0.0;
    std::vector<DangerLevel> cells;  // ordered by (row, col)
    std::array<std::size_t, kMaxLevel + 1> histogram{};
};

/// One score per grid cell, any order; output is sorted by (row, col).
DangerMap assess_grid(std::uint32_t rows, std::uint32_t cols, std::span<const TileScore> scores,
                      const fwi::FwiReport& report, const FusionConfig& cfg = {});

/// CSV `row,col,base_level,p_burn,level`, p_burn with 6 decimals.
void write_danger_csv(std::ostream& out, const DangerMap& map);
void write_danger_csv_file(const std::string& path, const DangerMap& map);
DangerMap read_danger_csv(std::istream& in);
DangerMap read_danger_csv_file(const std::string& path);

}  // namespace pyrorisk::fusion

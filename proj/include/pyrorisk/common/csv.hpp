// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace pyrorisk::csv {

/// A parsed CSV file: header plus rows of raw string cells. No quoting
/// support; every file this project reads or writes is plain
/// comma-separated numeric or identifier data.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header; throws DomainError when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

Table read(std::istream& in);
Table read_file(const std::string& path);

std::vector<std::string> split_line(std::string_view line);

/// Strict numeric parse of one cell; `field` names the column in errors.
double to_double(std::string_view cell, std::string_view field);

}  // namespace pyrorisk::csv

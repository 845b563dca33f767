#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flier::io {

// "# microflier-sim <version> | seed <seed> | config fnv1a:<hex>"
std::string meta_line(std::uint64_t seed, std::uint64_t config_hash);

// Fixed-notation number formatting (no locale, no negative zero) so outputs
// are byte-stable across runs and thread counts.
std::string fmt(double v, int decimals = 9);
std::string fmt_g(double v);  // shortest round-trip style, %.12g

// Simple rectangular table serialized as CSV or as a JSON array of row
// objects; both start with the metadata header.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string to_csv(const std::string& meta) const;
    std::string to_json(const std::string& meta) const;
    // Honors format = "csv" | "json" and appends the matching extension.
    void write(const std::string& dir, const std::string& stem,
               const std::string& format, const std::string& meta) const;
};

void write_file(const std::string& path, const std::string& content);

std::string join_path(const std::string& dir, const std::string& name);

}  // namespace flier::io

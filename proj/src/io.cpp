#include "flier/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flier/common.hpp"

namespace flier::io {

std::string meta_line(std::uint64_t seed, std::uint64_t config_hash) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# %s %s | seed %llu | config fnv1a:%016llx",
                  kToolName, kToolVersion,
                  static_cast<unsigned long long>(seed),
                  static_cast<unsigned long long>(config_hash));
    return buf;
}

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s = buf;
    // Collapse negative zero for byte-stable output.
    if (s.find_first_not_of("-0.") == std::string::npos &&
        s.find('-') != std::string::npos)
        s = s.substr(1);
    return s;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v + 0.0);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

void Table::add_row(std::vector<std::string> row) {
    rows.push_back(std::move(row));
}

std::string Table::to_csv(const std::string& meta) const {
    std::ostringstream out;
    out << meta << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else {
            out += c;
        }
    }
    return out;
}

// Cells are emitted unquoted when they parse as plain JSON numbers.
bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    return s.find_first_not_of("-+.0123456789eE") == std::string::npos;
}

}  // namespace

std::string Table::to_json(const std::string& meta) const {
    std::ostringstream out;
    out << "{\n  \"meta\": \"" << json_escape(meta) << "\",\n  \"rows\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << (r ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            out << (i ? ", " : "") << '"' << json_escape(columns[i])
                << "\": ";
            const std::string& cell = rows[r][i];
            if (looks_numeric(cell) || cell == "true" || cell == "false")
                out << cell;
            else
                out << '"' << json_escape(cell) << '"';
        }
        out << "}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

void Table::write(const std::string& dir, const std::string& stem,
                  const std::string& format, const std::string& meta) const {
    std::string path = join_path(dir, stem + "." + format);
    write_file(path, format == "json" ? to_json(meta) : to_csv(meta));
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << content;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace flier::io

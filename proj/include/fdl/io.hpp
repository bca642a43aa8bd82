// CSV / JSON emission helpers.  CSV is RFC 4180 with a mandatory header
// row and 17-significant-digit decimals; JSON uses nlohmann with its
// default (lexicographically ordered) key layout.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdl/common.hpp"

namespace fdl {

using json = nlohmann::json;

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size())
            throw std::invalid_argument("CsvWriter: row width mismatch");
        rows_.push_back(std::move(cells));
    }

    std::string str() const {
        std::string out = join(header_);
        for (const auto& r : rows_) out += join(r);
        return out;
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path.string());
        f << str();
    }

  private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += csv_quote(cells[i]);
        }
        line += "\r\n";
        return line;
    }
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

}  // namespace fdl

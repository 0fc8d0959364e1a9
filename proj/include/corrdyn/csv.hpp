#pragma once

// Deterministic CSV emission: a metadata comment block (# key=value), one
// header row, then rows of values printed with 17 significant digits.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "corrdyn/errors.hpp"

namespace corrdyn {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
    }

    void metadata(const std::string& key, const std::string& value) {
        out_ << "# " << key << "=" << value << "\n";
    }
    void metadata(const std::string& key, double value) { metadata(key, format_double(value)); }

    void header(const std::vector<std::string>& columns) {
        write_row(columns);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_double(v));
        write_row(cells);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace corrdyn

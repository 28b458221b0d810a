#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace ck::io {

// 17 significant digits: doubles round-trip exactly through the text files.
std::string fmt17(double v);

struct Csv {
    explicit Csv(std::vector<std::string> header) : columns(std::move(header)) {}
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void row(const std::vector<double>& vals);
    void row_mixed(const std::vector<std::string>& vals);
    void write(const std::string& path) const;
};

// Minimal SVG line plot: one polyline per series, optional log-log axes.
struct SvgPlot {
    std::string title;
    bool logx = false;
    bool logy = false;
    struct Series {
        std::string name;
        Vec x, y;
    };
    std::vector<Series> series;
    void write(const std::string& path) const;
};

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);
void ensure_dir(const std::string& path);

} // namespace ck::io

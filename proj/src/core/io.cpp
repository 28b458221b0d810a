#include "core/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ck::io {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Csv::row(const std::vector<double>& vals)
{
    std::vector<std::string> r;
    r.reserve(vals.size());
    for (double v : vals) r.push_back(fmt17(v));
    rows.push_back(std::move(r));
}

void Csv::row_mixed(const std::vector<std::string>& vals) { rows.push_back(vals); }

void Csv::write(const std::string& path) const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << columns[i];
    }
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            os << r[i];
        }
        os << '\n';
    }
    write_text(path, os.str());
}

namespace {

double map_coord(double v, double lo, double hi, double out_lo, double out_hi)
{
    if (hi <= lo) return 0.5 * (out_lo + out_hi);
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
}

} // namespace

void SvgPlot::write(const std::string& path) const
{
    const double W = 720, H = 480;
    const double mL = 70, mR = 20, mT = 40, mB = 50;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-300)) : v; };
    auto ty = [&](double v) { return logy ? std::log10(std::max(v, 1e-300)) : v; };
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (logy && s.y[i] <= 0.0) continue;
            if (logx && s.x[i] <= 0.0) continue;
            xlo = std::min(xlo, tx(s.x[i]));
            xhi = std::max(xhi, tx(s.x[i]));
            ylo = std::min(ylo, ty(s.y[i]));
            yhi = std::max(yhi, ty(s.y[i]));
        }
    if (xlo > xhi) {
        xlo = 0;
        xhi = 1;
        ylo = 0;
        yhi = 1;
    }
    if (ylo == yhi) {
        ylo -= 1;
        yhi += 1;
    }
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";
    // axes
    os << "<line x1=\"" << mL << "\" y1=\"" << H - mB << "\" x2=\"" << W - mR << "\" y2=\""
       << H - mB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << mL << "\" y1=\"" << mT << "\" x2=\"" << mL << "\" y2=\""
       << H - mB << "\" stroke=\"black\"/>\n";
    // tick labels at the corners of the data range
    auto label = [&](double v, bool is_log) {
        char buf[32];
        std::snprintf(buf, sizeof buf, is_log ? "1e%.3g" : "%.6g", v);
        return std::string(buf);
    };
    os << "<text x=\"" << mL << "\" y=\"" << H - mB + 18 << "\" font-size=\"11\">"
       << label(xlo, logx) << "</text>\n";
    os << "<text x=\"" << W - mR << "\" y=\"" << H - mB + 18
       << "\" text-anchor=\"end\" font-size=\"11\">" << label(xhi, logx) << "</text>\n";
    os << "<text x=\"" << mL - 6 << "\" y=\"" << H - mB << "\" text-anchor=\"end\" "
          "font-size=\"11\">"
       << label(ylo, logy) << "</text>\n";
    os << "<text x=\"" << mL - 6 << "\" y=\"" << mT + 10
       << "\" text-anchor=\"end\" font-size=\"11\">" << label(yhi, logy) << "</text>\n";
    int ci = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((logy && s.y[i] <= 0.0) || (logx && s.x[i] <= 0.0)) continue;
            const double px = map_coord(tx(s.x[i]), xlo, xhi, mL, W - mR);
            const double py = map_coord(ty(s.y[i]), ylo, yhi, H - mB, mT);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
            os << buf;
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - mR - 4 << "\" y=\"" << mT + 16 + 16 * ci
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[ci % 5] << "\">"
           << s.name << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << content;
    if (!f) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void ensure_dir(const std::string& path)
{
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

} // namespace ck::io

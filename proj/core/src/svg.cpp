#include "qnn/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 780.0;
constexpr double kTop = 50.0, kBottom = 560.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string format_svg(const TraceRecord& trace, const std::string& metric) {
    const int col = trace.label_index(metric);
    if (trace.steps().empty())
        throw ValidationError("svg: empty trace");

    double t_min = trace.steps().front().time;
    double t_max = trace.steps().back().time;
    double v_min = trace.steps().front().values[size_t(col)];
    double v_max = v_min;
    for (const auto& s : trace.steps()) {
        v_min = std::min(v_min, s.values[size_t(col)]);
        v_max = std::max(v_max, s.values[size_t(col)]);
    }
    if (t_max <= t_min) t_max = t_min + 1.0;
    if (v_max - v_min < 1e-12) {  // constant series: pad the value axis
        v_min -= 0.5;
        v_max += 0.5;
    }

    auto x_of = [&](double t) {
        return kLeft + (t - t_min) / (t_max - t_min) * (kRight - kLeft);
    };
    auto y_of = [&](double v) {
        return kBottom - (v - v_min) / (v_max - v_min) * (kBottom - kTop);
    };

    std::ostringstream out;
    const std::string title = escape_xml(metric);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(kWidth)
        << "\" height=\"" << int(kHeight) << "\" viewBox=\"0 0 " << int(kWidth)
        << " " << int(kHeight) << "\">\n";
    out << "  <title>" << title << "</title>\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << int(kWidth) << "\" height=\""
        << int(kHeight) << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << num((kLeft + kRight) / 2)
        << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
           "font-family=\"sans-serif\">" << title << "</text>\n";
    // axes
    out << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\""
        << num(kRight) << "\" y2=\"" << num(kBottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(kLeft) << "\" y2=\"" << num(kBottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // min/max tick labels
    out << "  <text x=\"" << num(kLeft) << "\" y=\"" << num(kBottom + 18)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << num(t_min) << "</text>\n";
    out << "  <text x=\"" << num(kRight) << "\" y=\"" << num(kBottom + 18)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << num(t_max) << "</text>\n";
    out << "  <text x=\"" << num(kLeft - 8) << "\" y=\"" << num(kBottom + 4)
        << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
        << num(v_min) << "</text>\n";
    out << "  <text x=\"" << num(kLeft - 8) << "\" y=\"" << num(kTop + 4)
        << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
        << num(v_max) << "</text>\n";
    // the curve
    out << "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& s : trace.steps()) {
        if (!first) out << " ";
        first = false;
        out << num(x_of(s.time)) << "," << num(y_of(s.values[size_t(col)]));
    }
    out << "\"/>\n";
    out << "</svg>\n";
    return out.str();
}

void emit_svg(const TraceRecord& trace, const std::string& metric,
              const std::filesystem::path& path) {
    const std::string body = format_svg(trace, metric);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << body;
    f.flush();
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace qnn

#include "qnn/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_csv(const TraceRecord& trace) {
    std::ostringstream out;
    out << "step,time";
    for (const auto& l : trace.labels()) out << "," << l;
    out << "\n";
    for (const auto& s : trace.steps()) {
        out << s.index << "," << format_value(s.time);
        for (double v : s.values) out << "," << format_value(v);
        out << "\n";
    }
    return out.str();
}

void emit_csv(const TraceRecord& trace, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << format_csv(trace);
    f.flush();
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

TraceRecord parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("csv: empty input");
    auto header = split_comma(line);
    if (header.size() < 3 || header[0] != "step" || header[1] != "time")
        throw ValidationError("csv: header must start with 'step,time,'");
    TraceRecord trace({header.begin() + 2, header.end()});
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_comma(line);
        if (fields.size() != header.size())
            throw ValidationError("csv: row " + std::to_string(line_no) +
                                  " has wrong field count");
        try {
            int step = std::stoi(fields[0]);
            double time = std::stod(fields[1]);
            std::vector<double> values;
            values.reserve(fields.size() - 2);
            for (size_t i = 2; i < fields.size(); ++i)
                values.push_back(std::stod(fields[i]));
            trace.append(step, time, std::move(values));
        } catch (const std::exception& e) {
            throw ValidationError("csv: row " + std::to_string(line_no) + ": " +
                                  e.what());
        }
    }
    return trace;
}

}  // namespace qnn

#include <algorithm>
#include <string>

#include "qnn/errors.hpp"
#include "qnn/trace.hpp"

namespace qnn {

TraceRecord::TraceRecord(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
    if (labels_.empty())
        throw ValidationError("trace: at least one label required");
    for (const auto& l : labels_) {
        if (l.empty() || l.find(',') != std::string::npos)
            throw ValidationError("trace: label '" + l +
                                  "' empty or contains a comma");
    }
}

void TraceRecord::append(int step_index, double time, std::vector<double> values) {
    if (values.size() != labels_.size())
        throw ValidationError("trace: row arity mismatch");
    if (!steps_.empty() && step_index <= steps_.back().index)
        throw ValidationError("trace: step indices must increase strictly");
    steps_.push_back({step_index, time, std::move(values)});
}

int TraceRecord::label_index(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return int(i);
    throw ValidationError("trace: unknown label '" + label + "'");
}

std::vector<double> TraceRecord::series(const std::string& label) const {
    const int col = label_index(label);
    std::vector<double> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.values[size_t(col)]);
    return out;
}

SteadyReport detect_steady_state(const TraceRecord& trace, int window, double tol) {
    if (window < 2)
        throw ValidationError("steady detection: window must be >= 2");
    const int n = int(trace.size());
    if (n < window)
        throw ValidationError("steady detection: trace shorter than window");

    SteadyReport report;
    report.window = window;
    report.tol = tol;

    const auto& steps = trace.steps();
    const size_t n_series = trace.labels().size();
    for (int end = window - 1; end < n; ++end) {
        bool ok = true;
        for (size_t col = 0; col < n_series && ok; ++col) {
            double lo = steps[size_t(end)].values[col];
            double hi = lo;
            for (int k = end - window + 1; k < end; ++k) {
                const double v = steps[size_t(k)].values[col];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            ok = (hi - lo) <= tol;
        }
        if (!ok) continue;
        report.converged = true;
        report.steady_step = steps[size_t(end)].index;
        for (size_t col = 0; col < n_series; ++col) {
            double mean = 0.0;
            for (int k = end - window + 1; k <= end; ++k)
                mean += steps[size_t(k)].values[col];
            report.steady_values[trace.labels()[col]] = mean / window;
        }
        break;
    }
    return report;
}

}  // namespace qnn

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qnn {

/// Named time series of per-step metric values. All rows share the label
/// arity; step indices increase strictly; labels may not contain commas
/// (they become CSV header fields verbatim).
class TraceRecord {
public:
    struct Step {
        int index;
        double time;
        std::vector<double> values;
    };

    explicit TraceRecord(std::vector<std::string> labels);

    void append(int step_index, double time, std::vector<double> values);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Step>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }

    /// Column of values for one label.
    std::vector<double> series(const std::string& label) const;
    int label_index(const std::string& label) const;

private:
    std::vector<std::string> labels_;
    std::vector<Step> steps_;
};

/// Convergence summary: earliest trailing window over which every tracked
/// series varies by at most tol, plus the window means at that point.
struct SteadyReport {
    bool converged = false;
    std::optional<int> steady_step;
    std::map<std::string, double> steady_values;
    int window = 0;
    double tol = 0.0;
};

/// Scans the trace for the earliest step where, over the trailing `window`
/// rows, every series has (max - min) <= tol. Steady values are the window
/// means. Throws if window < 2 or the trace is shorter than the window.
SteadyReport detect_steady_state(const TraceRecord& trace, int window, double tol);

}  // namespace qnn

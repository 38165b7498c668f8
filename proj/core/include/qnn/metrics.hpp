#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnn/state.hpp"

namespace qnn {

/// Reduced states an engine exposes to the metric evaluators at one step.
/// `nodes` is filled only when the plan asks for per-node fidelities; the
/// unit views only when a unit metric is tracked (first reservoir's unit,
/// measured right after the collision phase).
struct StepView {
    DensityMatrix output;
    std::vector<DensityMatrix> nodes;
    std::optional<DensityMatrix> unit;
    std::optional<DensityMatrix> out_unit;  // joint (output, unit), 2 qubits
    double omega = 1.0;
};

/// Tracked-metric vocabulary:
///   sigma_x_out sigma_y_out sigma_z_out p_up_out coherence_out
///   fidelity:<target>  fidelity_node<i>:<target>
///   mutual_info_out_unit entropy_unit energy_unit
class MetricPlan {
public:
    static MetricPlan resolve(const std::vector<std::string>& tracked,
                              const std::map<std::string, DensityMatrix>& targets,
                              int n_inputs, bool has_units);

    const std::vector<std::string>& labels() const { return labels_; }
    bool needs_nodes() const { return needs_nodes_; }
    bool needs_unit() const { return needs_unit_; }

    std::vector<double> evaluate(const StepView& view) const;

private:
    enum class Kind {
        sigma_x, sigma_y, sigma_z, p_up, coherence,
        fidelity_out, fidelity_node, mi_out_unit, entropy_unit, energy_unit
    };
    struct Entry {
        Kind kind;
        int node = -1;
        std::optional<DensityMatrix> target;
    };

    std::vector<std::string> labels_;
    std::vector<Entry> entries_;
    bool needs_nodes_ = false;
    bool needs_unit_ = false;
};

}  // namespace qnn

#include "qnn/metrics.hpp"

#include <cmath>

#include "qnn/errors.hpp"

namespace qnn {

namespace {

const std::string kVocabulary =
    "sigma_x_out, sigma_y_out, sigma_z_out, p_up_out, coherence_out, "
    "fidelity:<target>, fidelity_node<i>:<target>, mutual_info_out_unit, "
    "entropy_unit, energy_unit";

}  // namespace

MetricPlan MetricPlan::resolve(const std::vector<std::string>& tracked,
                               const std::map<std::string, DensityMatrix>& targets,
                               int n_inputs, bool has_units) {
    if (tracked.empty())
        throw ValidationError("metrics: tracked list is empty");
    MetricPlan plan;
    auto find_target = [&](const std::string& name,
                           const std::string& metric) -> DensityMatrix {
        auto it = targets.find(name);
        if (it == targets.end())
            throw ValidationError("metrics: '" + metric + "' references unknown target '" +
                                  name + "'");
        return it->second;
    };
    for (const auto& name : tracked) {
        Entry e{Kind::sigma_z, -1, std::nullopt};
        if (name == "sigma_x_out") e.kind = Kind::sigma_x;
        else if (name == "sigma_y_out") e.kind = Kind::sigma_y;
        else if (name == "sigma_z_out") e.kind = Kind::sigma_z;
        else if (name == "p_up_out") e.kind = Kind::p_up;
        else if (name == "coherence_out") e.kind = Kind::coherence;
        else if (name.rfind("fidelity:", 0) == 0) {
            e.kind = Kind::fidelity_out;
            e.target = find_target(name.substr(9), name);
        } else if (name.rfind("fidelity_node", 0) == 0) {
            const auto colon = name.find(':');
            if (colon == std::string::npos)
                throw ValidationError("metrics: '" + name + "' missing ':<target>'");
            const std::string idx = name.substr(13, colon - 13);
            size_t used = 0;
            int node = -1;
            try {
                node = std::stoi(idx, &used);
            } catch (const std::exception&) {
                throw ValidationError("metrics: bad node index in '" + name + "'");
            }
            if (used != idx.size() || node < 0 || node >= n_inputs)
                throw ValidationError("metrics: node index out of range in '" + name + "'");
            e.kind = Kind::fidelity_node;
            e.node = node;
            e.target = find_target(name.substr(colon + 1), name);
            plan.needs_nodes_ = true;
        } else if (name == "mutual_info_out_unit" || name == "entropy_unit" ||
                   name == "energy_unit") {
            if (!has_units)
                throw ValidationError("metrics: '" + name +
                                      "' requires a reservoir unit (not available in this run mode)");
            e.kind = name == "mutual_info_out_unit" ? Kind::mi_out_unit
                     : name == "entropy_unit"       ? Kind::entropy_unit
                                                    : Kind::energy_unit;
            plan.needs_unit_ = true;
        } else {
            throw ValidationError("metrics: unknown metric '" + name +
                                  "'; vocabulary: " + kVocabulary);
        }
        plan.labels_.push_back(name);
        plan.entries_.push_back(std::move(e));
    }
    return plan;
}

std::vector<double> MetricPlan::evaluate(const StepView& view) const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        double v = 0.0;
        switch (e.kind) {
            case Kind::sigma_x:
                v = expectation(view.output, Observable("sigma_x", pauli_x()));
                break;
            case Kind::sigma_y:
                v = expectation(view.output, Observable("sigma_y", pauli_y()));
                break;
            case Kind::sigma_z:
                v = expectation(view.output, Observable("sigma_z", pauli_z()));
                break;
            case Kind::p_up:
                v = view.output.matrix()(0, 0).real();
                break;
            case Kind::coherence:
                v = l1_coherence(view.output);
                break;
            case Kind::fidelity_out:
                v = fidelity(*e.target, view.output);
                break;
            case Kind::fidelity_node:
                v = fidelity(*e.target, view.nodes.at(size_t(e.node)));
                break;
            case Kind::mi_out_unit:
                v = mutual_information(*view.out_unit, {0}, {1});
                break;
            case Kind::entropy_unit:
                v = von_neumann_entropy(*view.unit);
                break;
            case Kind::energy_unit:
                v = internal_energy(*view.unit, 0.5 * view.omega * pauli_z());
                break;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace qnn

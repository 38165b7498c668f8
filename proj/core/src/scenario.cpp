#include "qnn/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "qnn/errors.hpp"

namespace qnn {

bool operator==(const PureBlochState& a, const PureBlochState& b) {
    return a.theta == b.theta && a.phi == b.phi;
}
bool operator==(const QnnTopology& a, const QnnTopology& b) {
    return a.n_inputs == b.n_inputs && a.omega == b.omega && a.couplings == b.couplings;
}
bool operator==(const ReservoirSpec& a, const ReservoirSpec& b) {
    return a.node == b.node && a.unit_state == b.unit_state && a.j_su == b.j_su;
}
bool operator==(const TargetState& a, const TargetState& b) {
    return a.kind == b.kind && a.components == b.components;
}
bool operator==(const CollisionSchedule& a, const CollisionSchedule& b) {
    return a.mode == b.mode && a.style == b.style && a.tau == b.tau &&
           a.n_collisions == b.n_collisions && a.tau_su == b.tau_su &&
           a.j_uu == b.j_uu && a.tau_uu == b.tau_uu;
}

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
    return topology == other.topology && initial_inputs == other.initial_inputs &&
           initial_output == other.initial_output && reservoirs == other.reservoirs &&
           run_mode == other.run_mode &&
           (run_mode == RunMode::closed
                ? (t_max == other.t_max && dt == other.dt)
                : schedule == other.schedule) &&
           targets == other.targets && tracked == other.tracked &&
           window == other.window && tol == other.tol;
}

void ScenarioConfig::validate() const {
    topology.validate();
    if (int(initial_inputs.size()) != topology.n_inputs)
        throw ValidationError("state: need one initial state per input node");
    std::vector<bool> used(topology.n_inputs, false);
    for (const auto& r : reservoirs) {
        if (r.node < 0 || r.node >= topology.n_inputs)
            throw ValidationError("reservoir: node out of range");
        if (used[r.node])
            throw ValidationError("reservoir: duplicate node " + std::to_string(r.node));
        used[r.node] = true;
    }
    if (run_mode == RunMode::closed) {
        if (!(t_max > 0.0) || !(dt > 0.0))
            throw ValidationError("schedule: closed mode requires t_max > 0 and dt > 0");
        if (dt > t_max)
            throw ValidationError("schedule: dt exceeds t_max");
    } else {
        if (t_max != 0.0 || dt != 0.0)
            throw ValidationError("schedule: t_max/dt only apply to closed mode");
        schedule.validate();
        if (run_mode == RunMode::markov &&
            schedule.mode != CollisionSchedule::Mode::markov)
            throw ValidationError("schedule: mode mismatch");
        if (run_mode == RunMode::non_markov) {
            if (schedule.mode != CollisionSchedule::Mode::non_markov)
                throw ValidationError("schedule: mode mismatch");
            if (reservoirs.size() != 1)
                throw ValidationError("schedule: non_markov requires exactly one reservoir");
        }
    }
    for (const auto& [name, t] : targets)
        target_density(t);  // validates weights/normalization
    const bool has_units = run_mode != RunMode::closed && !reservoirs.empty();
    MetricPlan::resolve(tracked, target_densities(), topology.n_inputs, has_units);
    if (window < 2)
        throw ValidationError("observe: window must be >= 2");
    if (!(tol > 0.0))
        throw ValidationError("observe: tol must be positive");
}

DensityMatrix ScenarioConfig::initial_state() const {
    std::vector<DensityMatrix> factors;
    for (const auto& s : initial_inputs) factors.push_back(bloch_pure(s));
    factors.push_back(bloch_pure(initial_output));
    return product_state(factors);
}

std::map<std::string, DensityMatrix> ScenarioConfig::target_densities() const {
    std::map<std::string, DensityMatrix> out;
    for (const auto& [name, t] : targets) out.emplace(name, target_density(t));
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
    int number;
    std::string text;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax_error(const std::string& source, int line, const std::string& msg) {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, const std::string& path) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(path + ": expected a number, got '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& path) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(path + ": expected an integer, got '" + s + "'");
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

PureBlochState parse_bloch(const std::string& s, const std::string& path) {
    auto parts = split_ws(s);
    if (parts.size() != 3 || parts[0] != "bloch")
        throw ValidationError(path + ": expected 'bloch <theta> <phi>', got '" + s + "'");
    return {parse_double(parts[1], path + ".theta"), parse_double(parts[2], path + ".phi")};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Section {
    std::string header;
    int line;
    std::vector<std::pair<std::string, std::string>> entries;  // ordered, repeats allowed
};

std::vector<Section> tokenize(const std::string& text, const std::string& source) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                syntax_error(source, line_no, "malformed section header '" + line + "'");
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            syntax_error(source, line_no, "expected 'key = value', got '" + line + "'");
        if (sections.empty())
            syntax_error(source, line_no, "entry before any [section] header");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) syntax_error(source, line_no, "empty key");
        sections.back().entries.push_back({key, value});
    }
    return sections;
}

/// Single-valued section view with unknown-key detection.
class EntryMap {
public:
    EntryMap(const Section& s, std::string path) : path_(std::move(path)) {
        for (const auto& [k, v] : s.entries) {
            if (!map_.emplace(k, v).second)
                throw ValidationError(path_ + "." + k + ": duplicate key");
        }
    }
    std::optional<std::string> get(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        seen_.insert(key);
        return it->second;
    }
    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw ValidationError(path_ + ": missing required key '" + key + "'");
        return *v;
    }
    void finish() {
        for (const auto& [k, _] : map_)
            if (!seen_.count(k))
                throw ValidationError(path_ + "." + k + ": unknown key");
    }

private:
    std::string path_;
    std::map<std::string, std::string> map_;
    std::set<std::string> seen_;
};

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
    ScenarioConfig cfg;
    cfg.name = source;
    auto sections = tokenize(text, source);

    bool saw_topology = false, saw_schedule = false, saw_state = false, saw_observe = false;
    std::vector<std::pair<int, Section>> reservoir_sections;
    std::vector<std::pair<std::string, Section>> target_sections;
    const Section* state_section = nullptr;

    for (const auto& sec : sections) {
        if (sec.header == "topology") {
            if (saw_topology) syntax_error(source, sec.line, "duplicate [topology]");
            saw_topology = true;
            EntryMap m(sec, "topology");
            cfg.topology.n_inputs = parse_int(m.require("n_inputs"), "topology.n_inputs");
            if (auto v = m.get("omega"))
                cfg.topology.omega = parse_double(*v, "topology.omega");
            for (const auto& tok : split_ws(m.require("couplings")))
                cfg.topology.couplings.push_back(parse_double(tok, "topology.couplings"));
            m.finish();
        } else if (sec.header == "state") {
            if (saw_state) syntax_error(source, sec.line, "duplicate [state]");
            saw_state = true;
            state_section = &sec;
        } else if (sec.header.rfind("reservoir.", 0) == 0) {
            int k = parse_int(sec.header.substr(10), sec.header);
            reservoir_sections.push_back({k, sec});
        } else if (sec.header.rfind("target.", 0) == 0) {
            std::string name = sec.header.substr(7);
            if (name.empty()) syntax_error(source, sec.line, "empty target name");
            target_sections.push_back({name, sec});
        } else if (sec.header == "schedule") {
            if (saw_schedule) syntax_error(source, sec.line, "duplicate [schedule]");
            saw_schedule = true;
            EntryMap m(sec, "schedule");
            const std::string mode = m.require("mode");
            if (mode == "closed") {
                cfg.run_mode = ScenarioConfig::RunMode::closed;
                cfg.t_max = parse_double(m.require("t_max"), "schedule.t_max");
                cfg.dt = parse_double(m.require("dt"), "schedule.dt");
            } else if (mode == "markov" || mode == "non_markov") {
                cfg.run_mode = mode == "markov" ? ScenarioConfig::RunMode::markov
                                                : ScenarioConfig::RunMode::non_markov;
                cfg.schedule.mode = mode == "markov" ? CollisionSchedule::Mode::markov
                                                     : CollisionSchedule::Mode::non_markov;
                cfg.schedule.tau = parse_double(m.require("tau"), "schedule.tau");
                cfg.schedule.n_collisions =
                    parse_int(m.require("n_collisions"), "schedule.n_collisions");
                if (auto v = m.get("style")) {
                    if (*v == "simultaneous")
                        cfg.schedule.style = CollisionSchedule::Style::simultaneous;
                    else if (*v == "split")
                        cfg.schedule.style = CollisionSchedule::Style::split;
                    else
                        throw ValidationError("schedule.style: expected 'simultaneous' or "
                                              "'split', got '" + *v + "'");
                }
                if (auto v = m.get("tau_su"))
                    cfg.schedule.tau_su = parse_double(*v, "schedule.tau_su");
                if (auto v = m.get("j_uu"))
                    cfg.schedule.j_uu = parse_double(*v, "schedule.j_uu");
                if (auto v = m.get("tau_uu"))
                    cfg.schedule.tau_uu = parse_double(*v, "schedule.tau_uu");
            } else {
                throw ValidationError("schedule.mode: expected closed|markov|non_markov, got '" +
                                      mode + "'");
            }
            m.finish();
        } else if (sec.header == "observe") {
            if (saw_observe) syntax_error(source, sec.line, "duplicate [observe]");
            saw_observe = true;
            EntryMap m(sec, "observe");
            if (auto v = m.get("tracked")) cfg.tracked = split_ws(*v);
            if (auto v = m.get("window")) cfg.window = parse_int(*v, "observe.window");
            if (auto v = m.get("tol")) cfg.tol = parse_double(*v, "observe.tol");
            m.finish();
        } else {
            syntax_error(source, sec.line, "unknown section [" + sec.header + "]");
        }
    }

    if (!saw_topology) throw ValidationError(source + ": missing [topology] section");
    if (!saw_schedule) throw ValidationError(source + ": missing [schedule] section");

    // States default to |+> on every site.
    const PureBlochState plus{M_PI / 2.0, 0.0};
    cfg.initial_inputs.assign(size_t(std::max(cfg.topology.n_inputs, 0)), plus);
    cfg.initial_output = plus;
    if (state_section) {
        EntryMap m(*state_section, "state");
        for (int i = 0; i < cfg.topology.n_inputs; ++i) {
            if (auto v = m.get("node" + std::to_string(i)))
                cfg.initial_inputs[size_t(i)] =
                    parse_bloch(*v, "state.node" + std::to_string(i));
        }
        if (auto v = m.get("output")) cfg.initial_output = parse_bloch(*v, "state.output");
        m.finish();
    }

    std::sort(reservoir_sections.begin(), reservoir_sections.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < reservoir_sections.size(); ++i) {
        const auto& [k, sec] = reservoir_sections[i];
        const std::string path = "reservoir." + std::to_string(k);
        if (int(i) != k)
            throw ValidationError(path + ": reservoir indices must be 0,1,2,...");
        EntryMap m(sec, path);
        ReservoirSpec spec;
        spec.node = parse_int(m.require("node"), path + ".node");
        spec.unit_state = parse_bloch(m.require("state"), path + ".state");
        spec.j_su = parse_double(m.require("j_su"), path + ".j_su");
        m.finish();
        cfg.reservoirs.push_back(spec);
    }

    for (const auto& [name, sec] : target_sections) {
        const std::string path = "target." + name;
        TargetState t;
        bool saw_kind = false;
        for (const auto& [key, value] : sec.entries) {
            if (key == "kind") {
                if (saw_kind) throw ValidationError(path + ".kind: duplicate key");
                saw_kind = true;
                if (value == "mixture") t.kind = TargetState::Kind::mixture;
                else if (value == "superposition") t.kind = TargetState::Kind::superposition;
                else throw ValidationError(path + ".kind: expected mixture|superposition");
            } else if (key == "component") {
                auto parts = split_ws(value);
                if (parts.size() != 4 || parts[1] != "bloch")
                    throw ValidationError(path + ".component: expected '<coeff> bloch <theta> <phi>'");
                double coeff = parse_double(parts[0], path + ".component");
                PureBlochState s{parse_double(parts[2], path + ".component.theta"),
                                 parse_double(parts[3], path + ".component.phi")};
                t.components.push_back({s, Complex(coeff, 0.0)});
            } else {
                throw ValidationError(path + "." + key + ": unknown key");
            }
        }
        if (!saw_kind) throw ValidationError(path + ": missing 'kind'");
        if (!cfg.targets.emplace(name, std::move(t)).second)
            throw ValidationError(path + ": duplicate target name");
    }

    if (cfg.tracked.empty())
        cfg.tracked = {"sigma_x_out", "sigma_y_out", "sigma_z_out", "p_up_out",
                       "coherence_out"};

    cfg.validate();
    return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "[topology]\n";
    out << "n_inputs = " << cfg.topology.n_inputs << "\n";
    out << "omega = " << format_double(cfg.topology.omega) << "\n";
    out << "couplings =";
    for (double j : cfg.topology.couplings) out << " " << format_double(j);
    out << "\n\n[state]\n";
    for (size_t i = 0; i < cfg.initial_inputs.size(); ++i)
        out << "node" << i << " = bloch " << format_double(cfg.initial_inputs[i].theta)
            << " " << format_double(cfg.initial_inputs[i].phi) << "\n";
    out << "output = bloch " << format_double(cfg.initial_output.theta) << " "
        << format_double(cfg.initial_output.phi) << "\n";
    for (size_t k = 0; k < cfg.reservoirs.size(); ++k) {
        const auto& r = cfg.reservoirs[k];
        out << "\n[reservoir." << k << "]\n";
        out << "node = " << r.node << "\n";
        out << "state = bloch " << format_double(r.unit_state.theta) << " "
            << format_double(r.unit_state.phi) << "\n";
        out << "j_su = " << format_double(r.j_su) << "\n";
    }
    out << "\n[schedule]\n";
    if (cfg.run_mode == ScenarioConfig::RunMode::closed) {
        out << "mode = closed\n";
        out << "t_max = " << format_double(cfg.t_max) << "\n";
        out << "dt = " << format_double(cfg.dt) << "\n";
    } else {
        out << "mode = "
            << (cfg.run_mode == ScenarioConfig::RunMode::markov ? "markov" : "non_markov")
            << "\n";
        out << "style = "
            << (cfg.schedule.style == CollisionSchedule::Style::simultaneous
                    ? "simultaneous" : "split")
            << "\n";
        out << "tau = " << format_double(cfg.schedule.tau) << "\n";
        out << "n_collisions = " << cfg.schedule.n_collisions << "\n";
        if (cfg.schedule.tau_su)
            out << "tau_su = " << format_double(*cfg.schedule.tau_su) << "\n";
        if (cfg.schedule.j_uu)
            out << "j_uu = " << format_double(*cfg.schedule.j_uu) << "\n";
        if (cfg.schedule.tau_uu)
            out << "tau_uu = " << format_double(*cfg.schedule.tau_uu) << "\n";
    }
    for (const auto& [name, t] : cfg.targets) {
        out << "\n[target." << name << "]\n";
        out << "kind = "
            << (t.kind == TargetState::Kind::mixture ? "mixture" : "superposition") << "\n";
        for (const auto& [state, coeff] : t.components)
            out << "component = " << format_double(coeff.real()) << " bloch "
                << format_double(state.theta) << " " << format_double(state.phi) << "\n";
    }
    out << "\n[observe]\n";
    out << "tracked =";
    for (const auto& m : cfg.tracked) out << " " << m;
    out << "\n";
    out << "window = " << cfg.window << "\n";
    out << "tol = " << format_double(cfg.tol) << "\n";
    return out.str();
}

}  // namespace qnn

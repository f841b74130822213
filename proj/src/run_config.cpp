#include "hopfflow/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hopfflow/curve_family.hpp"
#include "hopfflow/io.hpp"

namespace hopfflow {
namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "curve.family", "curve.n", "curve.theta", "curve.epsilon", "curve.modes",
        "curve.seed", "curve.freq_a", "curve.freq_b", "curve.phase", "curve.amplitude",
        "curve.path",
        "flow.scheme", "flow.deriv", "flow.dt", "flow.dt_max", "flow.cfl", "flow.adaptive",
        "flow.reject_tol", "flow.resample_every", "flow.max_steps", "flow.stop_kappa_sup",
        "flow.stop_energy_delta", "flow.stop_grad_norm", "flow.kappa_ceiling", "flow.regime",
        "flow.sample_every",
        "output.dir", "output.snapshot_every",
        "verify.hopf", "verify.evolution", "verify.moduli", "hopf.fiber_res"};
    return keys;
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
    std::map<std::string, std::string> pairs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError("config: unknown key '" + key + "'");
        pairs[key] = value;
    }
    return pairs;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ','))
        out.push_back(static_cast<int>(to_long(key, item)));
    if (out.empty()) throw ConfigError("config: key '" + key + "' expects a non-empty list");
    return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    const auto pairs = parse_pairs(text);
    RunConfig c;
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = pairs.find(key);
        return it == pairs.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("curve.family")) c.family = *v;
    if (c.family.empty()) throw ConfigError("config: missing required key 'curve.family'");
    static const std::set<std::string> families = {"latitude", "perturbed_great_circle",
                                                   "lissajous", "from_file"};
    if (!families.count(c.family))
        throw ConfigError("config: unknown curve.family '" + c.family + "'");

    if (const auto* v = get("curve.n")) c.flow.n = static_cast<int>(to_long("curve.n", *v));
    if (const auto* v = get("curve.theta")) c.theta = to_double("curve.theta", *v);
    if (const auto* v = get("curve.epsilon")) c.epsilon = to_double("curve.epsilon", *v);
    if (const auto* v = get("curve.modes")) c.modes = to_int_list("curve.modes", *v);
    if (const auto* v = get("curve.seed"))
        c.seed = static_cast<std::uint64_t>(to_long("curve.seed", *v));
    if (const auto* v = get("curve.freq_a")) c.freq_a = static_cast<int>(to_long("curve.freq_a", *v));
    if (const auto* v = get("curve.freq_b")) c.freq_b = static_cast<int>(to_long("curve.freq_b", *v));
    if (const auto* v = get("curve.phase")) c.phase = to_double("curve.phase", *v);
    if (const auto* v = get("curve.amplitude")) c.amplitude = to_double("curve.amplitude", *v);
    if (const auto* v = get("curve.path")) c.curve_path = *v;

    if (const auto* v = get("flow.scheme")) {
        if (*v == "imex") c.flow.scheme = TimeScheme::Imex;
        else if (*v == "rk4") c.flow.scheme = TimeScheme::Rk4;
        else throw ConfigError("config: flow.scheme must be imex or rk4");
    }
    if (const auto* v = get("flow.deriv")) {
        if (*v == "fd4") c.flow.deriv = DerivScheme::CentralDiff4;
        else if (*v == "spectral") c.flow.deriv = DerivScheme::Spectral;
        else throw ConfigError("config: flow.deriv must be fd4 or spectral");
    }
    if (const auto* v = get("flow.dt")) c.flow.dt = to_double("flow.dt", *v);
    if (const auto* v = get("flow.dt_max")) c.flow.dt_max = to_double("flow.dt_max", *v);
    if (const auto* v = get("flow.cfl")) c.flow.cfl = to_double("flow.cfl", *v);
    if (const auto* v = get("flow.adaptive")) c.flow.adaptive = to_bool("flow.adaptive", *v);
    if (const auto* v = get("flow.reject_tol")) c.flow.reject_tol = to_double("flow.reject_tol", *v);
    if (const auto* v = get("flow.resample_every"))
        c.flow.resample_every = static_cast<int>(to_long("flow.resample_every", *v));
    if (const auto* v = get("flow.max_steps")) c.flow.max_steps = to_long("flow.max_steps", *v);
    if (const auto* v = get("flow.stop_kappa_sup"))
        c.flow.stop_kappa_sup = to_double("flow.stop_kappa_sup", *v);
    if (const auto* v = get("flow.stop_energy_delta"))
        c.flow.stop_energy_delta = to_double("flow.stop_energy_delta", *v);
    if (const auto* v = get("flow.stop_grad_norm"))
        c.flow.stop_grad_norm = to_double("flow.stop_grad_norm", *v);
    if (const auto* v = get("flow.kappa_ceiling"))
        c.flow.kappa_ceiling = to_double("flow.kappa_ceiling", *v);
    if (const auto* v = get("flow.regime")) c.flow.regime = to_bool("flow.regime", *v);
    if (const auto* v = get("flow.sample_every"))
        c.flow.sample_every = static_cast<int>(to_long("flow.sample_every", *v));

    if (const auto* v = get("output.dir")) c.output_dir = *v;
    if (const auto* v = get("output.snapshot_every"))
        c.snapshot_every = static_cast<int>(to_long("output.snapshot_every", *v));

    if (const auto* v = get("verify.hopf")) c.verify_hopf = to_bool("verify.hopf", *v);
    if (const auto* v = get("verify.evolution")) c.verify_evolution = to_bool("verify.evolution", *v);
    if (const auto* v = get("verify.moduli")) c.verify_moduli = to_bool("verify.moduli", *v);
    if (const auto* v = get("hopf.fiber_res"))
        c.fiber_res = static_cast<int>(to_long("hopf.fiber_res", *v));

    c.flow.validate();
    return c;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str());
}

DiscreteCurve build_initial_curve(const RunConfig& config) {
    const int n = config.flow.n;
    if (config.family == "latitude") return latitude_circle(n, config.theta);
    if (config.family == "perturbed_great_circle")
        return perturbed_great_circle(n, config.epsilon, config.modes, config.seed);
    if (config.family == "lissajous")
        return lissajous_curve(n, config.freq_a, config.freq_b, config.phase, config.amplitude);
    if (config.family == "from_file") return read_snapshot_file(config.curve_path).curve;
    throw ConfigError("config: unknown curve.family '" + config.family + "'");
}

std::string run_config_schema() {
    return R"(curve.family            latitude | perturbed_great_circle | lissajous | from_file
curve.n                 nodes (>= 64)
curve.theta             latitude polar angle (radians)
curve.epsilon           perturbation amplitude
curve.modes             comma-separated Fourier modes, e.g. 2,3
curve.seed              RNG seed for perturbation phases
curve.freq_a curve.freq_b curve.phase curve.amplitude   lissajous parameters
curve.path              snapshot file for from_file
flow.scheme             imex | rk4
flow.deriv              fd4 | spectral
flow.dt flow.dt_max flow.cfl flow.adaptive flow.reject_tol
flow.resample_every flow.max_steps flow.sample_every
flow.stop_kappa_sup flow.stop_energy_delta flow.stop_grad_norm
flow.kappa_ceiling flow.regime
output.dir output.snapshot_every
verify.hopf verify.evolution verify.moduli hopf.fiber_res
)";
}

}  // namespace hopfflow

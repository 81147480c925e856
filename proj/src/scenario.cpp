// scenario.cpp - Config parsing, scenario execution, CSV and plot-script output

#include "dqb/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "dqb/battery.hpp"
#include "dqb/errors.hpp"
#include "dqb/resources.hpp"
#include "dqb/thermal.hpp"

namespace dqb {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(what + ": empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) throw ConfigError(what + ": not a number: '" + t + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(what + ": not a non-negative integer: '" + t + "'");
    }
    return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(what + ": expected true or false, got '" + t + "'");
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += sep;
        out += items[k];
    }
    return out;
}

// Runs f(0..n-1) on up to `jobs` threads. The exception of the lowest failing
// index is rethrown so failures are reported deterministically.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f) {
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                f(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

const std::map<std::string, ScenarioKind>& scenario_names() {
    static const std::map<std::string, ScenarioKind> names{
        {"spectrum", ScenarioKind::spectrum},   {"gibbs", ScenarioKind::gibbs},
        {"dephasing", ScenarioKind::dephasing}, {"thermal-sweep", ScenarioKind::thermal_sweep},
        {"charge", ScenarioKind::charge},       {"grid2d", ScenarioKind::grid2d}};
    return names;
}

// ---------------------------------------------------------------------------
// Column catalogue: default columns first, then optional ones.

struct ColumnSet {
    std::vector<std::string> defaults;
    std::vector<std::string> optional;
};

ColumnSet metric_columns(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::spectrum:
        return {{"nu1", "nu2", "nu3", "nu4", "cf_nu1", "cf_nu2", "cf_nu3", "cf_nu4", "eigenvalue_deviation",
                 "vector_residual"},
                {"kappa1", "kappa2"}};
    case ScenarioKind::gibbs:
        return {{"z11", "z14_re", "z14_im", "z22", "z23_re", "z23_im", "z44", "entry_deviation",
                 "eigenvalue_deviation", "vector_residual"},
                {"partition_function"}};
    case ScenarioKind::dephasing:
    case ScenarioKind::thermal_sweep:
        return {{"concurrence", "discord", "coherence"}, {"classical_correlation", "mutual_information"}};
    case ScenarioKind::charge:
        return {{"ergotropy", "power_instant", "capacity_basis", "capacity_unitary", "coherence"},
                {"discord", "work", "power_avg", "power_fd", "efficiency", "capacity_closed_form",
                 "ergotropy_closed_form", "ergotropy_closed_form_imag"}};
    case ScenarioKind::grid2d:
        return {{"capacity", "coherence_max", "ergotropy_max", "power_max"},
                {"capacity_basis", "capacity_closed_form", "ergotropy_argmax"}};
    }
    return {};
}

std::vector<std::string> selected_metrics(const ScenarioConfig& cfg) {
    if (!cfg.outputs.empty()) return cfg.outputs;
    auto cols = metric_columns(cfg.scenario).defaults;
    if (cfg.scenario == ScenarioKind::charge && cfg.with_discord) cols.push_back("discord");
    return cols;
}

// Named metric values for one row.
using Metrics = std::map<std::string, double>;

std::vector<double> pick(const Metrics& m, const std::vector<std::string>& names) {
    std::vector<double> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(m.at(n));
    return out;
}

bool wants(const std::vector<std::string>& names, const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
}

std::string context(const std::string& axis, double value) {
    return " (at " + axis + " = " + format_number(value) + ")";
}

template <typename E>
[[noreturn]] void rethrow_with(const E& e, const std::string& where) {
    throw E(std::string(e.what()) + where);
}

// Runs fn, prefixing inner numeric failures with the sweep point.
template <typename F>
auto with_context(const std::string& where, F&& fn) {
    try {
        return fn();
    } catch (const IntegrationError& e) {
        rethrow_with(e, where);
    } catch (const ParameterError& e) {
        rethrow_with(e, where);
    } catch (const ValidationError& e) {
        rethrow_with(e, where);
    }
}

// ---------------------------------------------------------------------------
// Per-scenario row producers.

Metrics state_measures(const DensityMatrix& rho, const std::vector<std::string>& names) {
    Metrics m;
    if (wants(names, "concurrence")) m["concurrence"] = concurrence(rho);
    if (wants(names, "coherence")) m["coherence"] = l1_coherence(rho);
    if (wants(names, "discord") || wants(names, "classical_correlation") || wants(names, "mutual_information")) {
        const DiscordResult d = quantum_discord(rho);
        m["discord"] = d.discord;
        m["classical_correlation"] = d.classical_correlation;
        m["mutual_information"] = d.mutual_information;
    }
    return m;
}

Metrics spectrum_row(const ModelParams& p) {
    p.validate();
    const ComplexMatrix h = build_hamiltonian(p);
    const auto numeric = hermitian_eigenvalues(h);
    const ClosedFormSpectrum cf = closed_form_spectrum(p);
    auto nu = cf.nu;
    std::sort(nu.begin(), nu.end());
    Metrics m;
    double dev = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        m["nu" + std::to_string(k + 1)] = numeric[k];
        m["cf_nu" + std::to_string(k + 1)] = nu[k];
        dev = std::max(dev, std::abs(numeric[k] - nu[k]));
    }
    double residual = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const ComplexVector hv = h * std::span<const cplx>(cf.eigvecs[k]);
        double r2 = 0.0;
        for (std::size_t i = 0; i < 4; ++i) r2 += std::norm(hv[i] - cf.nu[k] * cf.eigvecs[k][i]);
        residual = std::max(residual, std::sqrt(r2));
    }
    m["eigenvalue_deviation"] = dev;
    m["vector_residual"] = residual;
    m["kappa1"] = cf.kappa1;
    m["kappa2"] = cf.kappa2;
    return m;
}

Metrics gibbs_row(const ModelParams& p) {
    p.validate();
    const DensityMatrix numeric = gibbs_numeric(p);
    const GibbsClosedForm cf = gibbs_closed_form(p);
    const GibbsSpectrum gs = gibbs_spectrum(p);
    Metrics m;
    m["z11"] = cf.z11.real();
    m["z14_re"] = cf.z14.real();
    m["z14_im"] = cf.z14.imag();
    m["z22"] = cf.z22.real();
    m["z23_re"] = cf.z23.real();
    m["z23_im"] = cf.z23.imag();
    m["z44"] = cf.z44.real();
    m["entry_deviation"] = max_abs_diff(cf.to_matrix(), numeric.matrix());
    m["eigenvalue_deviation"] = gs.eigenvalue_deviation;
    m["vector_residual"] = gs.closed_form_vector_residual;
    double z = 0.0;
    for (double nu : hermitian_eigenvalues(build_hamiltonian(p))) z += std::exp(-nu / p.temperature);
    m["partition_function"] = z;
    return m;
}

Metrics grid_row(const ModelParams& p, std::size_t scan_points, const std::vector<std::string>& names) {
    p.validate();
    const CapacityReport cap = capacity(p);
    Metrics m;
    m["capacity"] = cap.capacity_unitary;
    m["capacity_basis"] = cap.capacity_basis;
    m["capacity_closed_form"] = cap.closed_form;
    if (wants(names, "coherence_max") || wants(names, "ergotropy_max") || wants(names, "power_max") ||
        wants(names, "ergotropy_argmax")) {
        const PeakMetrics peaks = peak_metrics(p, scan_points);
        m["coherence_max"] = peaks.coherence_max;
        m["ergotropy_max"] = peaks.ergotropy_max;
        m["power_max"] = peaks.power_max;
        m["ergotropy_argmax"] = peaks.ergotropy_argmax;
    }
    return m;
}

// Rows of a time-resolved scenario for one parameter point.
std::vector<Metrics> charge_rows(const ModelParams& p, const ScenarioConfig& cfg,
                                 const std::vector<std::string>& names, std::size_t jobs) {
    p.validate();
    const DensityMatrix zeta = gibbs_numeric(p);
    const Trajectory traj = charge_trajectory(p, zeta, cfg.grid, cfg.samples);
    const TimeSeries series = work_and_power(traj, p, zeta);
    const CapacityReport cap = capacity(p);
    const SpectralDecomposition hs = hermitian_eigen(build_hamiltonian(p));

    std::vector<Metrics> rows(traj.times.size());
    parallel_for(rows.size(), jobs, [&](std::size_t k) {
        const DensityMatrix& rho = traj.states[k];
        Metrics& m = rows[k];
        m["omega_t"] = p.omega * traj.times[k];
        for (const auto& col : {"ergotropy", "work", "power_avg", "power_instant", "power_fd", "efficiency"}) {
            m[col] = series.column(col)[k];
        }
        m["capacity_basis"] = cap.capacity_basis;
        m["capacity_unitary"] = unitary_capacity(rho.matrix(), hs);
        m["capacity_closed_form"] = cap.closed_form;
        m["coherence"] = l1_coherence(rho);
        if (wants(names, "ergotropy_closed_form") || wants(names, "ergotropy_closed_form_imag")) {
            const auto xi = closed_form_ergotropy(p, p.omega * traj.times[k]);
            m["ergotropy_closed_form"] = xi.real();
            m["ergotropy_closed_form_imag"] = xi.imag();
        }
        if (wants(names, "discord")) m["discord"] = quantum_discord(rho).discord;
    });
    return rows;
}

std::vector<Metrics> dephasing_rows(const ModelParams& p, const ScenarioConfig& cfg,
                                    const std::vector<std::string>& names, std::size_t jobs) {
    const Trajectory traj = evolve_lindblad(p, DensityMatrix::basis_state(0), cfg.grid, cfg.samples);
    std::vector<Metrics> rows(traj.times.size());
    parallel_for(rows.size(), jobs, [&](std::size_t k) {
        rows[k] = state_measures(traj.states[k], names);
        rows[k]["t"] = traj.times[k];
    });
    return rows;
}

void check_outputs(const ScenarioConfig& cfg) {
    const ColumnSet cs = metric_columns(cfg.scenario);
    std::set<std::string> seen;
    for (const auto& name : cfg.outputs) {
        if (!wants(cs.defaults, name) && !wants(cs.optional, name)) {
            std::vector<std::string> all = cs.defaults;
            all.insert(all.end(), cs.optional.begin(), cs.optional.end());
            throw ConfigError("unknown output '" + name + "' for scenario " + to_string(cfg.scenario) +
                              "; available: " + join(all, ", "));
        }
        if (!seen.insert(name).second) throw ConfigError("output '" + name + "' listed twice");
    }
}

std::string format_values(const std::vector<double>& values) {
    std::vector<std::string> parts;
    for (double v : values) parts.push_back(format_number(v));
    return join(parts, ",");
}

} // namespace

// ---------------------------------------------------------------------------

std::string to_string(ScenarioKind kind) {
    for (const auto& [name, k] : scenario_names())
        if (k == kind) return name;
    return "unknown";
}

ScenarioKind parse_scenario(const std::string& name) {
    const auto it = scenario_names().find(trim(name));
    if (it == scenario_names().end()) {
        std::vector<std::string> names;
        for (const auto& [n, k] : scenario_names()) names.push_back(n);
        throw ConfigError("unknown scenario '" + name + "'; expected one of " + join(names, ", "));
    }
    return it->second;
}

const std::vector<std::string>& parameter_names() {
    static const std::vector<std::string> names{"delta", "epsilon", "dm",    "ksea",
                                                "field", "temperature", "gamma", "omega"};
    return names;
}

void set_param(ModelParams& p, const std::string& name, double value) {
    if (name == "delta") p.delta = value;
    else if (name == "epsilon") p.epsilon = value;
    else if (name == "dm") p.dm = value;
    else if (name == "ksea") p.ksea = value;
    else if (name == "field") p.field = value;
    else if (name == "temperature") p.temperature = value;
    else if (name == "gamma") p.gamma = value;
    else if (name == "omega") p.omega = value;
    else throw ConfigError("unknown parameter '" + name + "'; expected one of " + join(parameter_names(), ", "));
}

double get_param(const ModelParams& p, const std::string& name) {
    if (name == "delta") return p.delta;
    if (name == "epsilon") return p.epsilon;
    if (name == "dm") return p.dm;
    if (name == "ksea") return p.ksea;
    if (name == "field") return p.field;
    if (name == "temperature") return p.temperature;
    if (name == "gamma") return p.gamma;
    if (name == "omega") return p.omega;
    throw ConfigError("unknown parameter '" + name + "'; expected one of " + join(parameter_names(), ", "));
}

// ---------------------------------------------------------------------------

void AxisSpec::validate() const {
    if (!wants(parameter_names(), name)) {
        throw ConfigError("sweep over unknown parameter '" + name + "'; expected one of " +
                          join(parameter_names(), ", "));
    }
    if (!values.empty()) {
        if (values.size() < 2) throw ConfigError("sweep '" + name + "': a value list needs at least 2 entries");
        for (double v : values)
            if (!std::isfinite(v)) throw ConfigError("sweep '" + name + "': non-finite value");
        return;
    }
    if (count < 2) throw ConfigError("sweep '" + name + "': count must be >= 2");
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
        throw ConfigError("sweep '" + name + "': need finite min < max");
    }
    if (scale == AxisScale::log && !(min > 0.0)) throw ConfigError("sweep '" + name + "': log scale needs min > 0");
}

std::vector<double> AxisSpec::points() const {
    validate();
    if (!values.empty()) return values;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(count - 1);
        out[k] = scale == AxisScale::log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                                         : min + f * (max - min);
    }
    out.front() = min;
    out.back() = max;
    return out;
}

AxisSpec parse_axis(const std::string& text) {
    AxisSpec a;
    const std::string t = trim(text);
    if (const auto at = t.find('@'); at != std::string::npos) {
        a.name = trim(t.substr(0, at));
        for (const auto& v : split(t.substr(at + 1), ',')) a.values.push_back(parse_double(v, "sweep " + a.name));
        a.count = a.values.size();
        a.validate();
        return a;
    }
    const auto parts = split(t, ':');
    if (parts.size() != 4 && parts.size() != 5) {
        throw ConfigError("malformed sweep '" + text + "'; expected name:min:max:count[:log] or name@v1,v2,...");
    }
    a.name = parts[0];
    a.min = parse_double(parts[1], "sweep " + a.name + " min");
    a.max = parse_double(parts[2], "sweep " + a.name + " max");
    a.count = parse_unsigned(parts[3], "sweep " + a.name + " count");
    if (parts.size() == 5) {
        if (parts[4] == "log") a.scale = AxisScale::log;
        else if (parts[4] == "linear") a.scale = AxisScale::linear;
        else throw ConfigError("sweep '" + a.name + "': unknown scale '" + parts[4] + "'");
    }
    a.validate();
    return a;
}

std::string format_axis(const AxisSpec& a) {
    if (!a.values.empty()) return a.name + "@" + format_values(a.values);
    std::string s = a.name + ":" + format_number(a.min) + ":" + format_number(a.max) + ":" + std::to_string(a.count);
    if (a.scale == AxisScale::log) s += ":log";
    return s;
}

// ---------------------------------------------------------------------------

void ScenarioConfig::validate() const {
    try {
        params.validate();
        grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (sweep) sweep->validate();
    if (second_axis) second_axis->validate();
    if (sweep && second_axis && sweep->name == second_axis->name) {
        throw ConfigError("sweep and sweep2 both vary '" + sweep->name + "'");
    }
    if (second_axis && !sweep) throw ConfigError("sweep2 given without sweep");
    check_outputs(*this);
    if (scan_points < 3) throw ConfigError("scan_points must be >= 3");

    const std::string name = to_string(scenario);
    switch (scenario) {
    case ScenarioKind::grid2d:
        if (!sweep || !second_axis) throw ConfigError("grid2d needs both sweep and sweep2");
        break;
    case ScenarioKind::thermal_sweep: {
        const bool t1 = sweep && sweep->name == "temperature";
        const bool t2 = second_axis && second_axis->name == "temperature";
        if (!t1 && !t2) throw ConfigError("thermal-sweep needs a sweep over temperature");
        break;
    }
    default:
        if (second_axis) throw ConfigError(name + " takes at most one sweep");
        break;
    }
    if (scenario == ScenarioKind::dephasing && sweep && sweep->name == "temperature") {
        throw ConfigError("dephasing does not depend on temperature");
    }
    if (scenario == ScenarioKind::charge && params.omega == 0.0) throw ConfigError("charge needs omega != 0");
}

void apply_setting(ScenarioConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "scenario") cfg.scenario = parse_scenario(value);
    else if (wants(parameter_names(), key)) set_param(cfg.params, key, parse_double(value, key));
    else if (key == "sweep") cfg.sweep = value.empty() ? std::nullopt : std::optional(parse_axis(value));
    else if (key == "sweep2") cfg.second_axis = value.empty() ? std::nullopt : std::optional(parse_axis(value));
    else if (key == "outputs") {
        cfg.outputs.clear();
        if (!value.empty())
            for (const auto& o : split(value, ',')) cfg.outputs.push_back(o);
    } else if (key == "t0") cfg.grid.t0 = parse_double(value, key);
    else if (key == "t1") cfg.grid.t1 = parse_double(value, key);
    else if (key == "dt") cfg.grid.dt = parse_double(value, key);
    else if (key == "samples") cfg.samples = parse_unsigned(value, key);
    else if (key == "scan_points") cfg.scan_points = parse_unsigned(value, key);
    else if (key == "with_discord") cfg.with_discord = parse_bool(value, key);
    else if (key == "out") cfg.out_path = value;
    else if (key == "seed") cfg.seed = parse_unsigned(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base) {
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        try {
            apply_setting(base, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "scenario = " << to_string(cfg.scenario) << '\n';
    for (const auto& name : parameter_names()) os << name << " = " << format_number(get_param(cfg.params, name)) << '\n';
    if (cfg.sweep) os << "sweep = " << format_axis(*cfg.sweep) << '\n';
    if (cfg.second_axis) os << "sweep2 = " << format_axis(*cfg.second_axis) << '\n';
    if (!cfg.outputs.empty()) os << "outputs = " << join(cfg.outputs, ",") << '\n';
    os << "t0 = " << format_number(cfg.grid.t0) << '\n';
    os << "t1 = " << format_number(cfg.grid.t1) << '\n';
    os << "dt = " << format_number(cfg.grid.dt) << '\n';
    os << "samples = " << cfg.samples << '\n';
    os << "scan_points = " << cfg.scan_points << '\n';
    os << "with_discord = " << (cfg.with_discord ? "true" : "false") << '\n';
    os << "out = " << cfg.out_path << '\n';
    os << "seed = " << cfg.seed << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const CsvTable& table, std::ostream& os) {
    os << join(table.header, ",") << '\n';
    for (const auto& row : table.rows) os << format_values(row) << '\n';
}

std::size_t default_jobs() {
    if (const char* env = std::getenv("DIPOLAR_QB_JOBS"); env && *env) {
        const std::uint64_t n = parse_unsigned(env, "DIPOLAR_QB_JOBS");
        if (n == 0) throw ConfigError("DIPOLAR_QB_JOBS must be >= 1");
        return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CsvTable compute_scenario(const ScenarioConfig& cfg, std::size_t jobs) {
    cfg.validate();
    const std::vector<std::string> metrics = selected_metrics(cfg);
    CsvTable table;

    switch (cfg.scenario) {
    case ScenarioKind::spectrum:
    case ScenarioKind::gibbs: {
        const std::vector<double> xs = cfg.sweep ? cfg.sweep->points() : std::vector<double>{};
        const std::size_t n = cfg.sweep ? xs.size() : 1;
        if (cfg.sweep) table.header.push_back(cfg.sweep->name);
        table.header.insert(table.header.end(), metrics.begin(), metrics.end());
        table.rows.resize(n);
        parallel_for(n, jobs, [&](std::size_t k) {
            ModelParams p = cfg.params;
            if (cfg.sweep) set_param(p, cfg.sweep->name, xs[k]);
            const std::string where = cfg.sweep ? context(cfg.sweep->name, xs[k]) : "";
            const Metrics m = with_context(where, [&] {
                return cfg.scenario == ScenarioKind::spectrum ? spectrum_row(p) : gibbs_row(p);
            });
            auto& row = table.rows[k];
            if (cfg.sweep) row.push_back(xs[k]);
            const auto values = pick(m, metrics);
            row.insert(row.end(), values.begin(), values.end());
        });
        break;
    }
    case ScenarioKind::dephasing:
    case ScenarioKind::charge: {
        const bool charge = cfg.scenario == ScenarioKind::charge;
        const std::vector<double> xs = cfg.sweep ? cfg.sweep->points() : std::vector<double>{0.0};
        if (cfg.sweep) table.header.push_back(cfg.sweep->name);
        table.header.push_back(charge ? "omega_t" : "t");
        table.header.insert(table.header.end(), metrics.begin(), metrics.end());
        for (double x : xs) {
            ModelParams p = cfg.params;
            if (cfg.sweep) set_param(p, cfg.sweep->name, x);
            const std::string where = cfg.sweep ? context(cfg.sweep->name, x) : "";
            const auto rows = with_context(where, [&] {
                return charge ? charge_rows(p, cfg, metrics, jobs) : dephasing_rows(p, cfg, metrics, jobs);
            });
            for (const auto& m : rows) {
                std::vector<double> row;
                if (cfg.sweep) row.push_back(x);
                row.push_back(m.at(charge ? "omega_t" : "t"));
                const auto values = pick(m, metrics);
                row.insert(row.end(), values.begin(), values.end());
                table.rows.push_back(std::move(row));
            }
        }
        break;
    }
    case ScenarioKind::thermal_sweep: {
        const bool first_is_t = cfg.sweep->name == "temperature";
        const AxisSpec& t_axis = first_is_t ? *cfg.sweep : *cfg.second_axis;
        const std::optional<AxisSpec> family = first_is_t ? cfg.second_axis : cfg.sweep;
        const std::vector<double> ts = t_axis.points();
        const std::vector<double> fs = family ? family->points() : std::vector<double>{0.0};
        if (family) table.header.push_back(family->name);
        table.header.push_back("T");
        table.header.insert(table.header.end(), metrics.begin(), metrics.end());
        table.rows.resize(fs.size() * ts.size());
        parallel_for(table.rows.size(), jobs, [&](std::size_t k) {
            const double f = fs[k / ts.size()];
            const double t = ts[k % ts.size()];
            ModelParams p = cfg.params;
            if (family) set_param(p, family->name, f);
            p.temperature = t;
            std::string where = context("T", t);
            if (family) where = context(family->name, f) + where;
            const Metrics m = with_context(where, [&] { return state_measures(gibbs_numeric(p), metrics); });
            auto& row = table.rows[k];
            if (family) row.push_back(f);
            row.push_back(t);
            const auto values = pick(m, metrics);
            row.insert(row.end(), values.begin(), values.end());
        });
        break;
    }
    case ScenarioKind::grid2d: {
        const std::vector<double> xs = cfg.sweep->points();
        const std::vector<double> ys = cfg.second_axis->points();
        table.header = {"x", "y"};
        table.header.insert(table.header.end(), metrics.begin(), metrics.end());
        table.rows.resize(xs.size() * ys.size());
        // y outer, x inner: x varies fastest.
        parallel_for(table.rows.size(), jobs, [&](std::size_t k) {
            const double x = xs[k % xs.size()];
            const double y = ys[k / xs.size()];
            ModelParams p = cfg.params;
            set_param(p, cfg.sweep->name, x);
            set_param(p, cfg.second_axis->name, y);
            const std::string where = context(cfg.sweep->name, x) + context(cfg.second_axis->name, y);
            const Metrics m = with_context(where, [&] { return grid_row(p, cfg.scan_points, metrics); });
            auto& row = table.rows[k];
            row = {x, y};
            const auto values = pick(m, metrics);
            row.insert(row.end(), values.begin(), values.end());
        });
        break;
    }
    }
    return table;
}

// ---------------------------------------------------------------------------

std::vector<std::string> required_columns(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::spectrum: return {"nu1", "nu2", "nu3", "nu4"};
    case ScenarioKind::gibbs: return {"z11", "z22", "z44", "z14_re", "z23_re"};
    case ScenarioKind::dephasing: return {"t", "concurrence", "discord", "coherence"};
    case ScenarioKind::thermal_sweep: return {"T", "concurrence", "discord", "coherence"};
    case ScenarioKind::charge:
        return {"omega_t", "ergotropy", "power_instant", "capacity_basis", "capacity_unitary", "coherence"};
    case ScenarioKind::grid2d: return {"x", "y", "capacity", "coherence_max", "ergotropy_max", "power_max"};
    }
    return {};
}

std::string plot_script(ScenarioKind kind, const std::vector<std::string>& header, const std::string& csv_path) {
    const auto required = required_columns(kind);
    std::vector<std::string> missing;
    for (const auto& c : required)
        if (!wants(header, c)) missing.push_back(c);
    if (!missing.empty()) {
        throw ConfigError("CSV '" + csv_path + "' lacks column(s) " + join(missing, ", ") + "; expected " +
                          join(required, ",") + ", found " + join(header, ","));
    }

    // A leading column outside the required set labels curve families.
    std::string family;
    if (kind != ScenarioKind::grid2d && !header.empty() && !wants(required, header.front())) family = header.front();

    std::string abscissa;
    std::vector<std::string> curves;
    switch (kind) {
    case ScenarioKind::spectrum:
        abscissa = family;
        curves = {"nu1", "nu2", "nu3", "nu4"};
        break;
    case ScenarioKind::gibbs:
        abscissa = family;
        curves = {"z11", "z22", "z44", "z14_re", "z23_re"};
        break;
    case ScenarioKind::dephasing:
        abscissa = "t";
        curves = {"concurrence", "discord", "coherence"};
        break;
    case ScenarioKind::thermal_sweep:
        abscissa = "T";
        curves = {"concurrence", "discord", "coherence"};
        break;
    case ScenarioKind::charge:
        abscissa = "omega_t";
        curves = {"ergotropy", "power_instant", "capacity_unitary", "coherence"};
        break;
    case ScenarioKind::grid2d:
        curves = {"capacity", "coherence_max", "ergotropy_max", "power_max"};
        break;
    }

    std::string stem = csv_path;
    if (const auto dot = stem.rfind('.'); dot != std::string::npos && stem.find('/', dot) == std::string::npos) {
        stem.erase(dot);
    }
    auto col = [](const std::string& c) { return "(column(\"" + c + "\"))"; };

    std::ostringstream os;
    os << "# " << to_string(kind) << " plot for " << csv_path << '\n';
    os << "set datafile separator \",\"\n";
    os << "set key autotitle columnhead\n"; // first CSV line is the header
    os << "set terminal pngcairo size " << 400 * curves.size() << ",400\n";
    os << "set output \"" << stem << ".png\"\n";
    os << "set multiplot layout 1," << curves.size() << '\n';
    if (kind == ScenarioKind::grid2d) {
        os << "set xlabel \"x\"\nset ylabel \"y\"\n";
        for (const auto& c : curves) {
            os << "set title \"" << c << "\"\n";
            os << "plot \"" << csv_path << "\" using " << col("x") << ":" << col("y") << ":" << col(c)
               << " with image notitle\n";
        }
    } else {
        os << "set key off\n";
        if (!family.empty()) os << "set cblabel \"" << family << "\"\n";
        if (!abscissa.empty()) os << "set xlabel \"" << abscissa << "\"\n";
        const std::string x = abscissa.empty() ? "0" : col(abscissa);
        for (const auto& c : curves) {
            os << "set title \"" << c << "\"\n";
            os << "plot \"" << csv_path << "\" using " << (abscissa.empty() ? "0" : x) << ":" << col(c);
            if (!family.empty() && family != abscissa) {
                os << ":" << col(family) << " with points pt 7 ps 0.3 lc palette\n";
            } else {
                os << " with linespoints pt 7 ps 0.3\n";
            }
        }
    }
    os << "unset multiplot\n";
    return os.str();
}

void emit_plot_script(const std::string& csv_path, ScenarioKind kind, const std::string& script_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read CSV '" + csv_path + "'");
    std::string line;
    std::getline(in, line);
    const std::string script = plot_script(kind, split(line, ','), csv_path);
    std::ofstream out(script_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write plot script '" + script_path + "'");
    out << script;
    if (!out) throw ConfigError("failed writing plot script '" + script_path + "'");
}

int run_scenario(const ScenarioConfig& cfg, std::size_t jobs, bool emit_plot, std::ostream& err) {
    try {
        cfg.validate();
        const bool to_stdout = cfg.out_path == "-";
        if (emit_plot && to_stdout) throw ConfigError("--emit-plot needs --out FILE");
        std::ofstream file;
        if (!to_stdout) {
            // Fail on an unwritable path before spending time on the computation.
            file.open(cfg.out_path, std::ios::binary | std::ios::trunc);
            if (!file) throw ConfigError("cannot write '" + cfg.out_path + "'");
        }
        const CsvTable table = compute_scenario(cfg, jobs);
        std::ostringstream csv;
        write_csv(table, csv);
        if (to_stdout) {
            std::fwrite(csv.str().data(), 1, csv.str().size(), stdout);
            std::fflush(stdout);
        } else {
            file << csv.str();
            file.close();
            if (!file) throw ConfigError("failed writing '" + cfg.out_path + "'");
            if (emit_plot) emit_plot_script(cfg.out_path, cfg.scenario, cfg.out_path + ".gp");
        }
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    }
}

} // namespace dqb

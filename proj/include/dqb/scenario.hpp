// scenario.hpp - Config parsing, scenario execution, CSV and plot-script output

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dqb/dynamics.hpp"
#include "dqb/model.hpp"

namespace dqb {

enum class ScenarioKind { spectrum, gibbs, dephasing, thermal_sweep, charge, grid2d };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario(const std::string& name);

enum class AxisScale { linear, log };

/// A swept parameter. Either a range (min, max, count, scale) or an explicit
/// value list when `values` is non-empty.
struct AxisSpec {
    std::string name;
    double min{0.0};
    double max{0.0};
    std::size_t count{0};
    AxisScale scale{AxisScale::linear};
    std::vector<double> values;

    std::vector<double> points() const;
    void validate() const;

    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// `name:min:max:count[:log]` or `name@v1,v2,...`.
AxisSpec parse_axis(const std::string& text);
std::string format_axis(const AxisSpec& axis);

/// Names accepted by set_param / get_param and as sweep axes.
const std::vector<std::string>& parameter_names();
void set_param(ModelParams& p, const std::string& name, double value);
double get_param(const ModelParams& p, const std::string& name);

struct ScenarioConfig {
    ScenarioKind scenario{ScenarioKind::spectrum};
    ModelParams params;
    std::optional<AxisSpec> sweep;
    std::optional<AxisSpec> second_axis;
    std::vector<std::string> outputs; // empty: the scenario's default columns
    TimeGrid grid;
    std::size_t samples{200};      // stored trajectory samples (0 keeps every step)
    std::size_t scan_points{2000}; // peak-metric scan resolution in grid2d
    bool with_discord{false};      // adds discord to charge output
    std::string out_path{"-"};     // "-" writes to stdout
    std::uint64_t seed{0};

    /// Throws ConfigError on an inconsistent config.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Applies one `key = value` setting; throws ConfigError on unknown keys or bad values.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` text, `#` comments. Keys not present keep their value in `base`.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});
std::string serialize_config(const ScenarioConfig& cfg);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// %.17g numbers, comma separated, LF line endings.
std::string format_number(double x);
void write_csv(const CsvTable& table, std::ostream& os);

/// DIPOLAR_QB_JOBS if set, else the hardware concurrency (at least 1).
std::size_t default_jobs();

/// Computes the scenario's table. Inner numeric errors propagate with context.
CsvTable compute_scenario(const ScenarioConfig& cfg, std::size_t jobs = 1);

/// Columns every CSV of this scenario must carry for plotting.
std::vector<std::string> required_columns(ScenarioKind kind);

/// gnuplot script for a CSV with the given header. Throws ConfigError listing
/// expected and found columns when a required column is missing.
std::string plot_script(ScenarioKind kind, const std::vector<std::string>& header, const std::string& csv_path);

/// Reads the CSV header and writes the script to `script_path`.
void emit_plot_script(const std::string& csv_path, ScenarioKind kind, const std::string& script_path);

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numeric = 2 };

/// Validates, computes and writes the CSV (and plot script if requested).
/// Messages go to `err`; returns an ExitCode.
int run_scenario(const ScenarioConfig& cfg, std::size_t jobs, bool emit_plot, std::ostream& err);

} // namespace dqb

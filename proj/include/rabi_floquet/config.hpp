// config.hpp: run configuration read from sectioned key = value text.
//
//   [model]       model, delta, g, g_prime, epsilon
//   [truncation]  n_cutoff, m_max
//   [task]        task, order, alpha, periods, samples_per_period, observable,
//                 nu_max, average_periods
//   [sweep]       axis, start, stop, step, quantity
//   [output]      dir, plot
//
// '#' and ';' start comments. Unknown sections or keys are errors.

#pragma once

#include "rabi_floquet/dynamics.hpp"
#include "rabi_floquet/hilbert.hpp"
#include "rabi_floquet/models.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabi_floquet {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TaskKind { spectrum, dynamics, fourier, sweep };
enum class SweepQuantity { spectrum, averages, gap };

std::string_view to_string(TaskKind t);
std::string_view to_string(SweepQuantity q);

struct ConfigEntry {
    std::string value;
    std::string origin;  // "file.cfg:12" or "--set"
};

// Keyed by "section.key".
using ConfigTable = std::map<std::string, ConfigEntry>;

ConfigTable parse_config(std::istream& in, const std::string& source);
ConfigTable load_config_file(const std::string& path);

// "section.key=value"; the key must be one of the known keys.
void apply_override(ConfigTable& table, const std::string& assignment);

struct SweepSpec {
    std::string axis{"g"};  // g, g_prime, epsilon or delta
    double start{0.0};
    double stop{1.0};
    double step{0.01};
    SweepQuantity quantity{SweepQuantity::spectrum};
};

struct RunConfig {
    ModelParams params;
    Truncation trunc{4, 10};
    TaskKind task{TaskKind::spectrum};
    int order{2};
    double alpha{3.0};
    double periods{300.0};
    int samples_per_period{50};
    Observable observable{Observable::W};
    double nu_max{3.0};
    double average_periods{150.0};
    std::optional<SweepSpec> sweep;
    std::string output_dir{"."};
    bool plot{false};
};

RunConfig build_run_config(const ConfigTable& table);

// start, start + step, ... while <= stop (with a relative slack of 1e-9 steps).
std::vector<double> sweep_values(const SweepSpec& s);

// Copy of p with the named parameter replaced; for the AsRM, g also sets g_prime.
ModelParams with_parameter(const ModelParams& p, const std::string& axis, double value);

const std::vector<std::string>& known_config_keys();

}  // namespace rabi_floquet

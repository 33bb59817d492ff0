#include "rabi_floquet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace rabi_floquet {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_known(const std::string& key) {
    const auto& keys = known_config_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

bool is_known_section(const std::string& section) {
    for (const auto& k : known_config_keys()) {
        if (k.compare(0, section.size() + 1, section + ".") == 0) return true;
    }
    return false;
}

class Reader {
public:
    explicit Reader(const ConfigTable& t) : table_(t) {}

    const ConfigEntry* find(const std::string& key) const {
        auto it = table_.find(key);
        return it == table_.end() ? nullptr : &it->second;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const ConfigEntry* e = find(key);
        throw ConfigError((e ? e->origin + ": " : std::string()) + key + ": " + what);
    }

    double number(const std::string& key, double fallback) const {
        const ConfigEntry* e = find(key);
        if (!e) return fallback;
        double v = 0.0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail(key, "expected a number, got '" + e->value + "'");
        return v;
    }

    int integer(const std::string& key, int fallback) const {
        const ConfigEntry* e = find(key);
        if (!e) return fallback;
        int v = 0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) fail(key, "expected an integer, got '" + e->value + "'");
        return v;
    }

    bool boolean(const std::string& key, bool fallback) const {
        const ConfigEntry* e = find(key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
        if (e->value == "false" || e->value == "0" || e->value == "no") return false;
        fail(key, "expected true or false, got '" + e->value + "'");
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        const ConfigEntry* e = find(key);
        return e ? e->value : fallback;
    }

private:
    const ConfigTable& table_;
};

TaskKind parse_task(const Reader& r) {
    const std::string t = r.text("task.task", "spectrum");
    if (t == "spectrum") return TaskKind::spectrum;
    if (t == "dynamics") return TaskKind::dynamics;
    if (t == "fourier") return TaskKind::fourier;
    if (t == "sweep") return TaskKind::sweep;
    r.fail("task.task", "unknown task '" + t + "' (expected spectrum, dynamics, fourier or sweep)");
}

SweepQuantity parse_quantity(const Reader& r) {
    const std::string q = r.text("sweep.quantity", "spectrum");
    if (q == "spectrum") return SweepQuantity::spectrum;
    if (q == "averages") return SweepQuantity::averages;
    if (q == "gap") return SweepQuantity::gap;
    r.fail("sweep.quantity", "unknown quantity '" + q + "' (expected spectrum, averages or gap)");
}

}  // namespace

std::string_view to_string(TaskKind t) {
    switch (t) {
        case TaskKind::spectrum: return "spectrum";
        case TaskKind::dynamics: return "dynamics";
        case TaskKind::fourier: return "fourier";
        case TaskKind::sweep: return "sweep";
    }
    return "?";
}

std::string_view to_string(SweepQuantity q) {
    switch (q) {
        case SweepQuantity::spectrum: return "spectrum";
        case SweepQuantity::averages: return "averages";
        case SweepQuantity::gap: return "gap";
    }
    return "?";
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "model.model",        "model.delta",        "model.g",
        "model.g_prime",      "model.epsilon",      "truncation.n_cutoff",
        "truncation.m_max",   "task.task",          "task.order",
        "task.alpha",         "task.periods",       "task.samples_per_period",
        "task.observable",    "task.nu_max",        "task.average_periods",
        "sweep.axis",         "sweep.start",        "sweep.stop",
        "sweep.step",         "sweep.quantity",     "output.dir",
        "output.plot",
    };
    return keys;
}

ConfigTable parse_config(std::istream& in, const std::string& source) {
    ConfigTable table;
    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!is_known_section(section)) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        if (section.empty()) throw ConfigError(where + ": key outside of any section");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!is_known(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (table.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        table[key] = {value, where};
    }
    return table;
}

ConfigTable load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config(in, path);
}

void apply_override(ConfigTable& table, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected section.key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (!is_known(key)) throw ConfigError("--set " + assignment + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("--set " + assignment + ": empty value");
    table[key] = {value, "--set"};
}

RunConfig build_run_config(const ConfigTable& table) {
    const Reader r(table);
    RunConfig c;

    ModelKind kind;
    try {
        kind = parse_model_kind(r.text("model.model", "airm"));
    } catch (const std::invalid_argument& e) {
        r.fail("model.model", e.what());
    }
    const double delta = r.number("model.delta", 0.1);
    const double g = r.number("model.g", 0.1);
    try {
        if (kind == ModelKind::airm) {
            if (table.count("model.epsilon")) r.fail("model.epsilon", "the airm model has no bias field");
            c.params = ModelParams::airm(delta, g, r.number("model.g_prime", 0.5 * g));
        } else {
            if (table.count("model.g_prime")) r.fail("model.g_prime", "the asrm model couples with g_prime = g");
            c.params = ModelParams::asrm(delta, g, r.number("model.epsilon", 0.0));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[model]: ") + e.what());
    }

    const int n_cutoff = r.integer("truncation.n_cutoff", 4);
    const int m_max = r.integer("truncation.m_max", 10);
    if (n_cutoff < 1) r.fail("truncation.n_cutoff", "must be >= 1");
    if (m_max < 2) r.fail("truncation.m_max", "must be >= 2");
    c.trunc = Truncation(n_cutoff, m_max);

    c.task = parse_task(r);
    c.order = r.integer("task.order", 2);
    if (c.order < 0 || c.order > 2) r.fail("task.order", "must be 0, 1 or 2");
    c.alpha = r.number("task.alpha", 3.0);
    c.periods = r.number("task.periods", 300.0);
    if (!(c.periods > 0.0)) r.fail("task.periods", "must be > 0");
    c.samples_per_period = r.integer("task.samples_per_period", 50);
    if (c.samples_per_period < 2) r.fail("task.samples_per_period", "must be >= 2");
    try {
        c.observable = parse_observable(r.text("task.observable", "W"));
    } catch (const std::invalid_argument& e) {
        r.fail("task.observable", e.what());
    }
    c.nu_max = r.number("task.nu_max", 3.0);
    if (!(c.nu_max > 0.0)) r.fail("task.nu_max", "must be > 0");
    c.average_periods = r.number("task.average_periods", 150.0);
    if (!(c.average_periods > 0.0)) r.fail("task.average_periods", "must be > 0");

    const bool any_sweep = std::any_of(table.begin(), table.end(),
                                       [](const auto& kv) { return kv.first.compare(0, 6, "sweep.") == 0; });
    if (any_sweep || c.task == TaskKind::sweep) {
        SweepSpec s;
        s.axis = r.text("sweep.axis", "g");
        if (s.axis != "g" && s.axis != "g_prime" && s.axis != "epsilon" && s.axis != "delta") {
            r.fail("sweep.axis", "unknown axis '" + s.axis + "' (expected g, g_prime, epsilon or delta)");
        }
        s.start = r.number("sweep.start", 0.0);
        s.stop = r.number("sweep.stop", 1.0);
        s.step = r.number("sweep.step", 0.01);
        if (!(s.step > 0.0)) r.fail("sweep.step", "must be > 0");
        if (!(s.start < s.stop)) r.fail("sweep.stop", "must exceed sweep.start");
        s.quantity = parse_quantity(r);
        if ((s.axis == "g_prime" && c.params.model == ModelKind::asrm) ||
            (s.axis == "epsilon" && c.params.model == ModelKind::airm)) {
            r.fail("sweep.axis", "axis '" + s.axis + "' does not apply to the " + std::string(to_string(c.params.model)) +
                                     " model");
        }
        if (s.quantity == SweepQuantity::spectrum && s.axis != "g") r.fail("sweep.axis", "spectrum sweeps run along g");
        if (s.quantity == SweepQuantity::gap && s.axis == "g") r.fail("sweep.axis", "gap sweeps run at g -> 0");
        c.sweep = s;
    }

    c.output_dir = r.text("output.dir", ".");
    c.plot = r.boolean("output.plot", false);
    return c;
}

std::vector<double> sweep_values(const SweepSpec& s) {
    if (!(s.step > 0.0) || !(s.start < s.stop)) throw std::invalid_argument("sweep_values: need start < stop and step > 0");
    const long count = std::lround(std::floor((s.stop - s.start) / s.step + 1e-9));
    std::vector<double> v(count + 1);
    for (long k = 0; k <= count; ++k) v[k] = s.start + static_cast<double>(k) * s.step;
    return v;
}

ModelParams with_parameter(const ModelParams& p, const std::string& axis, double value) {
    ModelParams q = p;
    if (axis == "g") {
        q.g = value;
        if (q.model == ModelKind::asrm) q.g_prime = value;
    } else if (axis == "g_prime") {
        q.g_prime = value;
    } else if (axis == "epsilon") {
        q.epsilon = value;
    } else if (axis == "delta") {
        q.delta = value;
    } else {
        throw std::invalid_argument("with_parameter: unknown axis '" + axis + "'");
    }
    q.validate();
    return q;
}

}  // namespace rabi_floquet

#include "rabi_floquet/tasks.hpp"

#include "rabi_floquet/fourier.hpp"
#include "rabi_floquet/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace rabi_floquet {

namespace {

using Row = std::vector<std::string>;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string status_text(const std::exception& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
        if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    return "failed: " + msg;
}

std::vector<double> axis_values(const RunConfig& c, double current) {
    if (c.sweep) return sweep_values(*c.sweep);
    return {current};
}

double axis_current(const ModelParams& p, const std::string& axis) {
    if (axis == "g") return p.g;
    if (axis == "g_prime") return p.g_prime;
    if (axis == "epsilon") return p.epsilon;
    return p.delta;
}

std::vector<double> time_grid(const RunConfig& c, double periods) { return period_grid(periods, c.samples_per_period); }

std::pair<Trajectory, Trajectory> both_routes(const RunConfig& c, const ModelParams& p, double periods,
                                              std::vector<Observable> observables) {
    EvolutionSpec spec;
    spec.initial = coherent_state(c.alpha, c.trunc, Spin::up);
    spec.times = time_grid(c, periods);
    spec.observables = std::move(observables);
    spec.order = c.order;
    spec.route = Route::floquet_analytic;
    Trajectory analytic = evolve(spec, p, c.trunc);
    spec.route = Route::lab_exact;
    Trajectory exact = evolve(spec, p, c.trunc);
    return {std::move(analytic), std::move(exact)};
}

Table merge(Row header, const std::vector<std::vector<Row>>& chunks) {
    Table t;
    t.header = std::move(header);
    for (const auto& chunk : chunks) {
        for (const auto& row : chunk) {
            if (!row.empty() && row.back().rfind("failed", 0) == 0) ++t.failed_rows;
            t.rows.push_back(row);
        }
    }
    return t;
}

std::string plot_script(const std::string& csv, const std::string& x, const std::vector<std::string>& ys) {
    std::ostringstream s;
    s << "import csv\nimport matplotlib.pyplot as plt\n\n"
      << "with open('" << csv << "') as fh:\n    rows = list(csv.DictReader(fh))\n\n"
      << "def col(name):\n    return [float(r[name]) if r[name] not in ('', 'nan') else float('nan') for r in rows]\n\n"
      << "fig, ax = plt.subplots()\n";
    for (const auto& y : ys) s << "ax.plot(col('" << x << "'), col('" << y << "'), label='" << y << "')\n";
    s << "ax.set_xlabel('" << x << "')\nax.legend()\nfig.savefig('" << csv.substr(0, csv.find('.')) << ".png', dpi=150)\n";
    return s.str();
}

std::string spectrum_plot_script() {
    return "import csv\nimport matplotlib.pyplot as plt\n\n"
           "with open('spectrum.csv') as fh:\n    rows = [r for r in csv.DictReader(fh) if r['level_id'] != 'failed']\n\n"
           "fig, ax = plt.subplots()\n"
           "for level in sorted({r['level_id'] for r in rows}):\n"
           "    sel = [r for r in rows if r['level_id'] == level]\n"
           "    g = [float(r['g']) for r in sel]\n"
           "    style = '-' if sel[0]['parity'] == 'even' else '--'\n"
           "    ax.plot(g, [float(r['E_analytic']) for r in sel], style, lw=1, label=level)\n"
           "    ax.plot(g, [float(r['E_numeric']) for r in sel], '.', ms=2, color='k')\n"
           "ax.set_xlabel('g')\nax.set_ylabel('quasi-energy')\nax.legend(fontsize=6)\n"
           "fig.savefig('spectrum.png', dpi=150)\n";
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    auto append = [&out](const Row& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += r[i];
        }
        out += '\n';
    };
    append(t.header);
    for (const auto& r : t.rows) append(r);
    return out;
}

unsigned worker_count() {
    if (const char* env = std::getenv("RABI_FLOQUET_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<Row>> parallel_rows(std::size_t n, const std::function<std::vector<Row>(std::size_t)>& fn) {
    std::vector<std::vector<Row>> out(n);
    const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

Table spectrum_table(const RunConfig& c) {
    const std::vector<double> gs = axis_values(c, c.params.g);
    const int max_pair = c.trunc.n_cutoff - 2;
    auto row_fn = [&](std::size_t i) -> std::vector<Row> {
        const std::string gtxt = format_number(gs[i]);
        try {
            const ModelParams p = with_parameter(c.params, "g", gs[i]);
            const NumericSpectrum num = numeric_quasi_energies(rotating_components(p, c.trunc), c.trunc);
            std::vector<Row> rows;
            for (const auto& level : analytic_levels(p, max_pair, c.order)) {
                double best = kNaN;
                double dist = std::numeric_limits<double>::infinity();
                for (const auto& nl : num.levels) {
                    const double d = std::abs(folded_difference(nl.value_folded, level.value_folded, num.Omega));
                    if (d < dist) {
                        dist = d;
                        best = nl.value_folded;
                    }
                }
                const LevelKey key = *level.key();
                rows.push_back({gtxt, key.label(), std::to_string(key.n), std::string(to_string(key.branch)),
                                std::string(to_string(key.parity())), format_number(level.value_folded),
                                format_number(best)});
            }
            return rows;
        } catch (const NumericalFailure&) {
            return {{gtxt, "failed", "", "", "", "nan", "nan"}};
        }
    };
    Table t = merge({"g", "level_id", "n", "branch", "parity", "E_analytic", "E_numeric"}, parallel_rows(gs.size(), row_fn));
    for (const auto& r : t.rows) t.failed_rows += r[1] == "failed";
    return t;
}

Table dynamics_table(const RunConfig& c) {
    const auto [an, ex] = both_routes(c, c.params, c.periods, {Observable::W, Observable::M, Observable::G});
    Table t;
    t.header = {"t_over_T", "W_analytic", "W_exact", "M_analytic", "M_exact", "G_analytic", "G_exact"};
    for (std::size_t k = 0; k < an.times.size(); ++k) {
        t.rows.push_back({format_number(an.times[k]), format_number(an.at(Observable::W)[k]),
                          format_number(ex.at(Observable::W)[k]), format_number(an.at(Observable::M)[k]),
                          format_number(ex.at(Observable::M)[k]), format_number(an.at(Observable::G)[k]),
                          format_number(ex.at(Observable::G)[k])});
    }
    return t;
}

Table fourier_table(const RunConfig& c) {
    const auto [an, ex] = both_routes(c, c.params, c.periods, {c.observable});
    const std::vector<double> nu = frequency_grid(c.nu_max, c.periods);
    const double T = c.params.period();
    const FrequencySpectrum sa = fourier_spectrum(an, c.observable, nu, T);
    const FrequencySpectrum se = fourier_spectrum(ex, c.observable, nu, T);
    Table t;
    t.header = {"nu", "magnitude_analytic", "magnitude_exact"};
    for (std::size_t j = 0; j < nu.size(); ++j) {
        t.rows.push_back({format_number(nu[j]), format_number(sa.magnitudes[j]), format_number(se.magnitudes[j])});
    }
    return t;
}

Table averages_table(const RunConfig& c) {
    const std::string axis = c.sweep ? c.sweep->axis : "epsilon";
    const std::vector<double> xs = axis_values(c, axis_current(c.params, axis));
    auto row_fn = [&](std::size_t i) -> std::vector<Row> {
        const std::string xtxt = format_number(xs[i]);
        try {
            const ModelParams p = with_parameter(c.params, axis, xs[i]);
            const auto [an, ex] = both_routes(c, p, c.average_periods, {Observable::W, Observable::M, Observable::G});
            const auto a = time_average(an, 0.0, c.average_periods);
            const auto e = time_average(ex, 0.0, c.average_periods);
            return {{xtxt, format_number(a.at(Observable::W)), format_number(e.at(Observable::W)),
                     format_number(a.at(Observable::M)), format_number(e.at(Observable::M)),
                     format_number(a.at(Observable::G)), format_number(e.at(Observable::G)), "ok"}};
        } catch (const std::exception& err) {
            return {{xtxt, "nan", "nan", "nan", "nan", "nan", "nan", status_text(err)}};
        }
    };
    return merge({axis, "W0_analytic", "W0_exact", "M0_analytic", "M0_exact", "G0_analytic", "G0_exact", "status"},
                 parallel_rows(xs.size(), row_fn));
}

Table gap_table(const RunConfig& c) {
    const std::string axis = c.sweep ? c.sweep->axis : "epsilon";
    const std::vector<double> xs = axis_values(c, axis_current(c.params, axis));
    auto row_fn = [&](std::size_t i) -> std::vector<Row> {
        const std::string xtxt = format_number(xs[i]);
        try {
            const ModelParams p = with_parameter(c.params, axis, xs[i]);
            const double an = detuning_gap(p, GapMode::analytic_formula, c.trunc);
            const double nu = detuning_gap(p, GapMode::numeric_limit, c.trunc);
            return {{xtxt, format_number(an), format_number(nu), format_number(std::abs(nu - an) / std::abs(an)), "ok"}};
        } catch (const std::exception& err) {
            return {{xtxt, "nan", "nan", "nan", status_text(err)}};
        }
    };
    return merge({axis, "gap_analytic", "gap_numeric", "relative_error", "status"}, parallel_rows(xs.size(), row_fn));
}

TaskOutput run_task(const RunConfig& c) {
    TaskOutput out;
    auto add = [&out](const std::string& name, const Table& t) {
        out.files.push_back({name, to_csv(t)});
        out.failed_rows += t.failed_rows;
    };

    SweepQuantity quantity = SweepQuantity::spectrum;
    if (c.task == TaskKind::sweep) quantity = c.sweep ? c.sweep->quantity : SweepQuantity::spectrum;

    if (c.task == TaskKind::spectrum || (c.task == TaskKind::sweep && quantity == SweepQuantity::spectrum)) {
        add("spectrum.csv", spectrum_table(c));
        if (c.plot) out.files.push_back({"plot_spectrum.py", spectrum_plot_script()});
    } else if (c.task == TaskKind::dynamics) {
        add("dynamics.csv", dynamics_table(c));
        if (c.plot) {
            out.files.push_back({"plot_dynamics.py", plot_script("dynamics.csv", "t_over_T",
                                                                 {"W_analytic", "W_exact", "M_analytic", "M_exact",
                                                                  "G_analytic", "G_exact"})});
        }
    } else if (c.task == TaskKind::fourier) {
        add("fourier.csv", fourier_table(c));
        std::ostringstream meta;
        meta << "observable=" << to_string(c.observable) << "\n"
             << "window=rectangular\n"
             << "dc_removed=true\n"
             << "frequency_unit=Omega/2pi\n"
             << "magnitude=unnormalised |dt * sum x_k exp(-i 2 pi nu t_k/T)|\n"
             << "periods=" << format_number(c.periods) << "\n"
             << "samples_per_period=" << c.samples_per_period << "\n";
        out.files.push_back({"fourier.meta", meta.str()});
        if (c.plot) {
            out.files.push_back(
                {"plot_fourier.py", plot_script("fourier.csv", "nu", {"magnitude_analytic", "magnitude_exact"})});
        }
    } else if (quantity == SweepQuantity::averages) {
        add("averages.csv", averages_table(c));
        if (c.plot) {
            out.files.push_back({"plot_averages.py", plot_script("averages.csv", c.sweep->axis,
                                                                 {"W0_analytic", "W0_exact", "M0_analytic", "M0_exact",
                                                                  "G0_analytic", "G0_exact"})});
        }
    } else {
        add("gap.csv", gap_table(c));
        if (c.plot) {
            out.files.push_back({"plot_gap.py", plot_script("gap.csv", c.sweep->axis, {"gap_analytic", "gap_numeric"})});
        }
    }
    return out;
}

void write_outputs(const TaskOutput& out, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    for (const auto& f : out.files) {
        const fs::path path = fs::path(dir) / f.name;
        std::ofstream os(path, std::ios::binary);
        os << f.content;
        if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    }
}

}  // namespace rabi_floquet

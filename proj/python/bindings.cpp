#include "rabi_floquet/cli.hpp"
#include "rabi_floquet/dynamics.hpp"
#include "rabi_floquet/fourier.hpp"
#include "rabi_floquet/hfe.hpp"
#include "rabi_floquet/models.hpp"
#include "rabi_floquet/spectrum.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>

namespace py = pybind11;
using namespace rabi_floquet;

namespace {

Branch parse_branch(const std::string& s) {
    if (s == "plus" || s == "+") return Branch::plus;
    if (s == "minus" || s == "-") return Branch::minus;
    if (s == "zero" || s == "0") return Branch::zero;
    throw std::invalid_argument("branch must be plus, minus or zero");
}

EffectiveExpansion expansion(const ModelParams& p, const Truncation& t, const std::string& method) {
    if (method == "closed") return closed_form_expansion(p, t);
    if (method == "generic") return generic_expansion(p, t);
    throw std::invalid_argument("method must be 'closed' or 'generic'");
}

py::dict level_dict(const QuasiEnergyLevel& l) {
    py::dict d;
    d["folded"] = l.value_folded;
    d["unfolded"] = l.value_unfolded;
    if (auto k = l.key()) {
        d["label"] = k->label();
        d["n"] = k->n;
    } else {
        d["label"] = py::none();
        d["n"] = py::none();
    }
    d["branch"] = std::string(to_string(l.branch));
    d["parity"] = std::string(to_string(l.parity));
    return d;
}

Trajectory as_trajectory(const std::vector<double>& times, const std::vector<double>& values) {
    Trajectory tr;
    tr.times = times;
    tr.series[Observable::W] = values;
    return tr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Floquet high-frequency expansion and exact dynamics of anisotropic and asymmetric Rabi models";

    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    py::class_<ModelParams>(m, "ModelParams")
        .def_static("airm", &ModelParams::airm, py::arg("delta"), py::arg("g"), py::arg("g_prime"))
        .def_static("asrm", &ModelParams::asrm, py::arg("delta"), py::arg("g"), py::arg("epsilon"))
        .def_property_readonly("model", [](const ModelParams& p) { return std::string(to_string(p.model)); })
        .def_readonly("delta", &ModelParams::delta)
        .def_readonly("g", &ModelParams::g)
        .def_readonly("g_prime", &ModelParams::g_prime)
        .def_readonly("epsilon", &ModelParams::epsilon)
        .def_property_readonly("drive_frequency", &ModelParams::drive_frequency)
        .def_property_readonly("period", &ModelParams::period)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(" + std::string(to_string(p.model)) + ", delta=" + std::to_string(p.delta) +
                   ", g=" + std::to_string(p.g) + ", g_prime=" + std::to_string(p.g_prime) +
                   ", epsilon=" + std::to_string(p.epsilon) + ")";
        });

    py::class_<Truncation>(m, "Truncation")
        .def(py::init<int, int>(), py::arg("n_cutoff") = 4, py::arg("m_max") = 10)
        .def_readonly("n_cutoff", &Truncation::n_cutoff)
        .def_readonly("m_max", &Truncation::m_max)
        .def_property_readonly("dim", &Truncation::dim);

    m.def("lab_hamiltonian", &lab_hamiltonian, py::arg("params"), py::arg("trunc"));
    m.def(
        "rotating_components",
        [](const ModelParams& p, const Truncation& t) { return rotating_components(p, t).components; },
        py::arg("params"), py::arg("trunc"));
    m.def(
        "effective_hamiltonian",
        [](const ModelParams& p, const Truncation& t, int order, const std::string& method) {
            return expansion(p, t, method).effective_hamiltonian(order);
        },
        py::arg("params"), py::arg("trunc"), py::arg("order") = 2, py::arg("method") = "closed");
    m.def(
        "kick_harmonics",
        [](const ModelParams& p, const Truncation& t, int order, const std::string& method) {
            return expansion(p, t, method).kick_harmonics(order);
        },
        py::arg("params"), py::arg("trunc"), py::arg("order") = 1, py::arg("method") = "closed");

    m.def("fold_to_first_bz", &fold_to_first_bz, py::arg("energy"), py::arg("omega"));
    m.def(
        "analytic_quasi_energy",
        [](const ModelParams& p, int n, const std::string& branch, int order) {
            return level_dict(analytic_quasi_energy(p, {n, parse_branch(branch)}, order));
        },
        py::arg("params"), py::arg("n"), py::arg("branch"), py::arg("order") = 2);
    m.def(
        "analytic_levels",
        [](const ModelParams& p, int max_pair_n, int order) {
            py::list out;
            for (const auto& l : analytic_levels(p, max_pair_n, order)) out.append(level_dict(l));
            return out;
        },
        py::arg("params"), py::arg("max_pair_n"), py::arg("order") = 2);
    m.def(
        "numeric_quasi_energies",
        [](const ModelParams& p, const Truncation& t) {
            NumericSpectrum s;
            {
                py::gil_scoped_release release;
                s = numeric_quasi_energies(rotating_components(p, t), t);
                label_numeric_levels(s, p, t);
            }
            py::list out;
            for (std::size_t i = 0; i < s.levels.size(); ++i) {
                py::dict d = level_dict(s.levels[i]);
                d["overlap"] = s.label_overlap[i];
                d["parity_expectation"] = s.parity_expectation[i];
                out.append(d);
            }
            return out;
        },
        py::arg("params"), py::arg("trunc"));
    m.def(
        "detuning_gap",
        [](const ModelParams& p, const std::string& mode, const Truncation& t) {
            if (mode == "analytic") return detuning_gap(p, GapMode::analytic_formula, t);
            if (mode == "numeric") return detuning_gap(p, GapMode::numeric_limit, t);
            throw std::invalid_argument("mode must be 'analytic' or 'numeric'");
        },
        py::arg("params"), py::arg("mode") = "analytic", py::arg("trunc") = Truncation{4, 10});

    m.def(
        "evolve",
        [](const ModelParams& p, const Truncation& t, const std::vector<double>& times, const std::string& route,
           double alpha, int order) {
            EvolutionSpec spec;
            spec.initial = coherent_state(alpha, t, Spin::up);
            spec.times = times;
            spec.order = order;
            if (route == "floquet_analytic" || route == "analytic") {
                spec.route = Route::floquet_analytic;
            } else if (route == "lab_exact" || route == "exact") {
                spec.route = Route::lab_exact;
            } else {
                throw std::invalid_argument("route must be 'analytic' or 'exact'");
            }
            Trajectory tr;
            {
                py::gil_scoped_release release;
                tr = evolve(spec, p, t);
            }
            py::dict d;
            d["t_over_T"] = tr.times;
            for (const auto& [o, x] : tr.series) d[py::str(std::string(to_string(o)))] = x;
            return d;
        },
        py::arg("params"), py::arg("trunc"), py::arg("times"), py::arg("route") = "exact", py::arg("alpha") = 3.0,
        py::arg("order") = 2, "Times in units of the drive period; returns t_over_T, W, M, G.");

    m.def(
        "time_average",
        [](const std::vector<double>& times, const std::vector<double>& values, double t_start, double t_end) {
            return time_average(as_trajectory(times, values), t_start, t_end).at(Observable::W);
        },
        py::arg("times"), py::arg("values"), py::arg("t_start"), py::arg("t_end"));
    m.def(
        "fourier_spectrum",
        [](const std::vector<double>& times, const std::vector<double>& values, const std::vector<double>& nu_grid,
           double period) {
            const FrequencySpectrum s = fourier_spectrum(as_trajectory(times, values), Observable::W, nu_grid, period);
            return std::make_pair(s.frequencies, s.magnitudes);
        },
        py::arg("times"), py::arg("values"), py::arg("nu_grid"), py::arg("period"),
        "Mean-subtracted rectangular-window transform; nu in units of Omega/2pi, times in units of T.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            py::gil_scoped_release release;
            return run_cli(args, std::cout, std::cerr);
        },
        py::arg("args"));
}

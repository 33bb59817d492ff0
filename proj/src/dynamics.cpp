#include "rabi_floquet/dynamics.hpp"

#include "rabi_floquet/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

namespace rabi_floquet {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kNormTol = 1e-8;
constexpr double kImagTol = 1e-10;

struct Diagonalised {
    Operator vectors;
    Eigen::VectorXd values;

    explicit Diagonalised(const Operator& H) {
        Eigen::SelfAdjointEigenSolver<Operator> solver(H);
        if (solver.info() != Eigen::Success) throw NumericalFailure("self-adjoint eigensolver did not converge");
        vectors = solver.eigenvectors();
        values = solver.eigenvalues();
    }

    State apply(const State& psi, double s) const {
        Eigen::VectorXcd c = vectors.adjoint() * psi;
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -values(k) * s);
        return vectors * c;
    }
};

void check_times(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) throw std::invalid_argument("evolve: times must be non-negative");
        if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("evolve: times must be strictly increasing");
    }
}

}  // namespace

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::W: return "W";
        case Observable::M: return "M";
        case Observable::G: return "G";
    }
    return "?";
}

std::string_view to_string(Route r) { return r == Route::floquet_analytic ? "floquet_analytic" : "lab_exact"; }

Observable parse_observable(std::string_view text) {
    if (text == "W") return Observable::W;
    if (text == "M") return Observable::M;
    if (text == "G") return Observable::G;
    throw std::invalid_argument("unknown observable '" + std::string(text) + "' (expected W, M or G)");
}

Operator hermitian_exponential(const Operator& H, double s) {
    if (H.rows() != H.cols()) throw std::invalid_argument("hermitian_exponential: matrix is not square");
    const double defect = H.size() ? max_abs(H - H.adjoint()) : 0.0;
    if (defect > kHermitianTol) {
        throw std::invalid_argument("hermitian_exponential: input not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const Diagonalised d(H);
    Eigen::VectorXcd phases(d.values.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -d.values(k) * s);
    return d.vectors * phases.asDiagonal() * d.vectors.adjoint();
}

Operator floquet_propagator(const EffectiveExpansion& exp, double t, const Truncation& trunc, int order) {
    const Operator H_eff = exp.effective_hamiltonian(order);
    const Operator K_t = kick_operator_at(exp, t, order);
    const Operator K_0 = kick_operator_at(exp, 0.0, order);
    return gauge_transform(t, trunc) * hermitian_exponential(K_t, 1.0) * hermitian_exponential(H_eff, t) *
           hermitian_exponential(K_0, -1.0);
}

Operator lab_propagator(const ModelParams& p, double t, const Truncation& trunc) {
    return hermitian_exponential(lab_hamiltonian(p, trunc), t);
}

Operator observable_operator(Observable o, const Truncation& trunc) {
    const SpinOps s = build_spin_ops(trunc);
    switch (o) {
        case Observable::W: return s.sz;
        case Observable::M: return s.sx;
        case Observable::G: {
            const auto [a, ad] = build_ladder_ops(trunc);
            return (a + ad) * s.sx;
        }
    }
    throw std::invalid_argument("observable_operator: unknown observable");
}

const std::vector<double>& Trajectory::at(Observable o) const {
    auto it = series.find(o);
    if (it == series.end()) throw std::out_of_range("Trajectory: observable " + std::string(to_string(o)) + " not recorded");
    return it->second;
}

std::vector<double> period_grid(double periods, int samples_per_period) {
    if (!(periods > 0.0) || samples_per_period < 1) throw std::invalid_argument("period_grid: need periods > 0 and samples >= 1");
    const long count = std::lround(std::floor(periods * samples_per_period + 1e-9));
    std::vector<double> t(count + 1);
    for (long k = 0; k <= count; ++k) t[k] = static_cast<double>(k) / samples_per_period;
    return t;
}

Trajectory evolve(const EvolutionSpec& spec, const ModelParams& p, const Truncation& trunc) {
    p.validate();
    check_times(spec.times);
    const State psi0 = spec.initial.size() ? spec.initial : coherent_state(3.0, trunc, Spin::up);
    if (psi0.size() != trunc.dim()) throw std::invalid_argument("evolve: initial state dimension mismatch");
    const double T = p.period();

    std::vector<std::pair<Observable, Operator>> ops;
    Trajectory traj;
    traj.route = spec.route;
    traj.times = spec.times;
    for (Observable o : spec.observables) {
        if (traj.series.count(o)) continue;
        ops.emplace_back(o, observable_operator(o, trunc));
        traj.series[o].reserve(spec.times.size());
    }

    std::function<State(double)> state_at;
    std::optional<Diagonalised> lab;
    std::optional<Diagonalised> eff;
    EffectiveExpansion expansion;
    State kicked0;
    std::unordered_map<long long, Operator> kick_cache;
    const Eigen::VectorXd frame = frame_generator_diagonal(trunc);

    if (spec.route == Route::lab_exact) {
        lab.emplace(lab_hamiltonian(p, trunc));
        state_at = [&](double t) { return lab->apply(psi0, t); };
    } else {
        expansion = closed_form_expansion(p, trunc);
        eff.emplace(expansion.effective_hamiltonian(spec.order));
        kicked0 = hermitian_exponential(kick_operator_at(expansion, 0.0, spec.order), -1.0) * psi0;
        state_at = [&](double t) {
            // K(t) has period T; e^{-iK} is reused for samples at the same phase.
            const double phase = t / T - std::floor(t / T);
            const long long key = std::llround(phase * 1e9);
            auto it = kick_cache.find(key);
            if (it == kick_cache.end()) {
                it = kick_cache.emplace(key, hermitian_exponential(kick_operator_at(expansion, phase * T, spec.order), 1.0))
                         .first;
            }
            State psi = it->second * eff->apply(kicked0, t);
            for (Eigen::Index k = 0; k < psi.size(); ++k) psi(k) *= std::polar(1.0, -frame(k) * t);
            return psi;
        };
    }

    const double norm0 = psi0.norm();
    for (double tau : spec.times) {
        const double t = tau * T;
        const State psi = state_at(t);
        const double drift = std::abs(psi.norm() - norm0);
        if (drift > kNormTol) {
            std::ostringstream msg;
            msg << "evolve: norm drift " << drift << " at t/T=" << tau << " (" << to_string(spec.route) << ")";
            throw NumericalFailure(msg.str());
        }
        const double n2 = psi.squaredNorm();
        for (const auto& [o, A] : ops) {
            const cplx v = psi.dot(A * psi) / n2;
            if (std::abs(v.imag()) > kImagTol) {
                std::ostringstream msg;
                msg << "evolve: imaginary residue " << v.imag() << " in <" << to_string(o) << "> at t/T=" << tau;
                throw NumericalFailure(msg.str());
            }
            traj.series[o].push_back(v.real());
        }
    }
    return traj;
}

std::map<Observable, double> time_average(const Trajectory& traj, double t_start, double t_end) {
    if (!(t_end >= t_start)) throw std::invalid_argument("time_average: window end precedes start");
    const double slack = 1e-9 * std::max(1.0, std::abs(t_end));
    std::size_t lo = traj.times.size(), hi = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] >= t_start - slack && traj.times[i] <= t_end + slack) {
            lo = std::min(lo, i);
            hi = i;
        }
    }
    if (lo > hi || lo == traj.times.size()) throw std::invalid_argument("time_average: no samples in window");

    std::map<Observable, double> out;
    for (const auto& [o, x] : traj.series) {
        if (lo == hi) {
            out[o] = x[lo];
            continue;
        }
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += 0.5 * (x[i] + x[i + 1]) * (traj.times[i + 1] - traj.times[i]);
        out[o] = acc / (traj.times[hi] - traj.times[lo]);
    }
    return out;
}

}  // namespace rabi_floquet

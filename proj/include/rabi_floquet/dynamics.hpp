// dynamics.hpp: evolution of a qubit-cavity state by the analytic Floquet
// propagator and by exact lab-frame diagonalisation, plus observable traces.

#pragma once

#include "rabi_floquet/hfe.hpp"
#include "rabi_floquet/hilbert.hpp"
#include "rabi_floquet/models.hpp"

#include <map>
#include <string_view>
#include <vector>

namespace rabi_floquet {

enum class Observable { W, M, G };  // <sigma_z>, <sigma_x>, <(a + a^dag) sigma_x>
enum class Route { floquet_analytic, lab_exact };

std::string_view to_string(Observable o);
std::string_view to_string(Route r);
Observable parse_observable(std::string_view text);

// exp(-i H s) through a self-adjoint eigendecomposition. Throws std::invalid_argument
// when H deviates from Hermitian by more than 1e-10.
Operator hermitian_exponential(const Operator& H, double s);

// U(t,0) = V(t) e^{-iK(t)} e^{-i H_eff t} e^{iK(0)}, with V(0) = 1.
Operator floquet_propagator(const EffectiveExpansion& exp, double t, const Truncation& trunc, int order = 2);

Operator lab_propagator(const ModelParams& p, double t, const Truncation& trunc);

Operator observable_operator(Observable o, const Truncation& trunc);

struct EvolutionSpec {
    State initial;                   // empty: coherent |alpha = 3> ⊗ |+>
    std::vector<double> times;       // units of the drive period T, >= 0 and strictly increasing
    Route route{Route::lab_exact};
    std::vector<Observable> observables{Observable::W, Observable::M, Observable::G};
    int order{2};                    // expansion order used by the analytic route
};

struct Trajectory {
    Route route{Route::lab_exact};
    std::vector<double> times;  // units of T
    std::map<Observable, std::vector<double>> series;

    const std::vector<double>& at(Observable o) const;
};

// k / samples_per_period for k = 0 .. periods * samples_per_period.
std::vector<double> period_grid(double periods, int samples_per_period);

// Throws NumericalFailure if the norm drifts by more than 1e-8 or an expectation
// value carries an imaginary part above 1e-10.
Trajectory evolve(const EvolutionSpec& spec, const ModelParams& p, const Truncation& trunc);

// Trapezoidal mean of each series over samples with t_start <= t <= t_end (units of T).
// On a uniform grid this is the sample mean with half weight on the two end points.
std::map<Observable, double> time_average(const Trajectory& traj, double t_start, double t_end);

}  // namespace rabi_floquet

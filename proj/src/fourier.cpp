#include "rabi_floquet/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rabi_floquet {

std::vector<double> frequency_grid(double nu_max, double periods) {
    if (!(nu_max > 0.0) || !(periods > 0.0)) throw std::invalid_argument("frequency_grid: need nu_max > 0 and periods > 0");
    const long count = std::lround(std::floor(nu_max * periods + 1e-9));
    std::vector<double> nu(count + 1);
    for (long k = 0; k <= count; ++k) nu[k] = static_cast<double>(k) / periods;
    return nu;
}

std::vector<std::complex<double>> fourier_transform(const std::vector<double>& times, const std::vector<double>& values,
                                                    const std::vector<double>& nu_grid, double period) {
    if (times.size() != values.size()) throw std::invalid_argument("fourier_transform: times and values differ in length");
    if (times.size() < 2) throw std::invalid_argument("fourier_transform: need at least two samples");
    const double step = times[1] - times[0];
    if (!(step > 0.0)) throw std::invalid_argument("fourier_transform: times must increase");
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double expected = times[0] + static_cast<double>(k) * step;
        if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            throw std::invalid_argument("fourier_transform: non-uniform time grid at sample " + std::to_string(k));
        }
    }

    const double dt = step * period;
    std::vector<std::complex<double>> out(nu_grid.size());
    for (std::size_t j = 0; j < nu_grid.size(); ++j) {
        // Phase recurrence on the uniform grid; the rotor is renormalised each step.
        const std::complex<double> rot = std::polar(1.0, -2.0 * std::numbers::pi * nu_grid[j] * step);
        std::complex<double> phase = std::polar(1.0, -2.0 * std::numbers::pi * nu_grid[j] * times[0]);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < times.size(); ++k) {
            acc += values[k] * phase;
            phase *= rot;
            phase /= std::abs(phase);
        }
        out[j] = dt * acc;
    }
    return out;
}

FrequencySpectrum fourier_spectrum(const Trajectory& traj, Observable o, const std::vector<double>& nu_grid,
                                   double period) {
    for (std::size_t j = 1; j < nu_grid.size(); ++j) {
        if (!(nu_grid[j] > nu_grid[j - 1])) throw std::invalid_argument("fourier_spectrum: frequency grid must increase");
    }
    std::vector<double> x = traj.at(o);
    if (x.empty()) throw std::invalid_argument("fourier_spectrum: empty trajectory");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double& v : x) v -= mean;

    const auto F = fourier_transform(traj.times, x, nu_grid, period);
    FrequencySpectrum spec;
    spec.frequencies = nu_grid;
    spec.observable = o;
    spec.magnitudes.reserve(F.size());
    for (const auto& f : F) spec.magnitudes.push_back(std::abs(f));
    return spec;
}

std::vector<Peak> find_peaks(const FrequencySpectrum& spec) {
    const auto& m = spec.magnitudes;
    std::vector<Peak> peaks;
    for (std::size_t j = 1; j + 1 < m.size(); ++j) {
        if (m[j] > m[j - 1] && m[j] >= m[j + 1]) peaks.push_back({j, spec.frequencies[j], m[j]});
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.magnitude > b.magnitude; });
    return peaks;
}

}  // namespace rabi_floquet

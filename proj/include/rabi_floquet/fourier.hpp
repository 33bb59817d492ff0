// fourier.hpp: rectangular-window Fourier transform of sampled trajectories.
// Frequencies are in units of Omega/2pi and times in units of T, so the kernel is
// exp(-i 2 pi nu t/T) and the integral carries the physical step dt = T * dtau.

#pragma once

#include "rabi_floquet/dynamics.hpp"

#include <complex>
#include <vector>

namespace rabi_floquet {

struct FrequencySpectrum {
    std::vector<double> frequencies;  // units of Omega/2pi, strictly increasing
    std::vector<double> magnitudes;   // |F(nu)|
    Observable observable{Observable::W};
    bool dc_removed{true};
};

struct Peak {
    std::size_t index{0};
    double frequency{0.0};
    double magnitude{0.0};
};

// 0, 1/periods, 2/periods, ... up to nu_max inclusive.
std::vector<double> frequency_grid(double nu_max, double periods);

// dt * sum_k x_k exp(-i 2 pi nu tau_k), tau in units of T and dt = period * (tau_1 - tau_0).
// Throws std::invalid_argument for fewer than two samples or a non-uniform grid.
std::vector<std::complex<double>> fourier_transform(const std::vector<double>& times, const std::vector<double>& values,
                                                    const std::vector<double>& nu_grid, double period);

// Mean-subtracted transform of one observable of a trajectory.
FrequencySpectrum fourier_spectrum(const Trajectory& traj, Observable o, const std::vector<double>& nu_grid,
                                   double period);

// Interior local maxima, largest first.
std::vector<Peak> find_peaks(const FrequencySpectrum& spec);

}  // namespace rabi_floquet

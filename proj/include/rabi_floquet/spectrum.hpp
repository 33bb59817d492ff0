// spectrum.hpp: quasi-energy spectra by two routes: the analytic 1/Omega series
// of the effective 2x2 blocks, and diagonalisation of the truncated extended
// Floquet (Sambe) space.

#pragma once

#include "rabi_floquet/hfe.hpp"
#include "rabi_floquet/hilbert.hpp"
#include "rabi_floquet/models.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabi_floquet {

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Branch { plus, minus, zero };
enum class Parity { even, odd, none };
enum class Provenance { analytic, numeric };

std::string_view to_string(Branch b);
std::string_view to_string(Parity p);

// E0 is {0, zero}; E_{n+-} pairs |n,+> with |n+1,-> and carries N = n+1.
struct LevelKey {
    int n{0};
    Branch branch{Branch::zero};

    static LevelKey ground() { return {0, Branch::zero}; }
    int excitation() const noexcept { return branch == Branch::zero ? 0 : n + 1; }
    Parity parity() const noexcept { return excitation() % 2 == 0 ? Parity::even : Parity::odd; }
    std::string label() const;  // "E0", "E3+", "E1-"
    bool operator==(const LevelKey&) const = default;
};

struct QuasiEnergyLevel {
    double value_folded{0.0};    // in [-Omega/2, Omega/2)
    double value_unfolded{0.0};
    std::optional<int> n;
    Branch branch{Branch::zero};
    Parity parity{Parity::none};
    Provenance provenance{Provenance::analytic};

    std::optional<LevelKey> key() const;
};

struct RabiFrequencies {
    double rabi{0.0};                 // sqrt(Delta^2 + 4 g^2 (n+1))
    std::optional<double> bias;       // sqrt(2 eps^2 + g^2 (n+1)), AsRM only
};

RabiFrequencies rabi_frequencies(const ModelParams& p, int n);

// E - Omega*round(E/Omega) in [-Omega/2, Omega/2); Omega/2 maps to -Omega/2.
double fold_to_first_bz(double E, double Omega);

// Signed distance a - b wrapped into [-Omega/2, Omega/2).
double folded_difference(double a, double b, double Omega);

// Per-order terms E^(0), E^(1), E^(2) of the series for one level.
std::array<double, 3> quasi_energy_terms(const ModelParams& p, LevelKey key,
                                         std::optional<double> omega_override = std::nullopt);

QuasiEnergyLevel analytic_quasi_energy(const ModelParams& p, LevelKey key, int order = 2,
                                       std::optional<double> omega_override = std::nullopt);

// E0 plus E_{n+-} for n = 0..max_pair_n.
std::vector<QuasiEnergyLevel> analytic_levels(const ModelParams& p, int max_pair_n, int order = 2);

struct AnalyticMode {
    State state;                  // unit norm, embedded in the truncated space
    double coefficient{0.0};      // C_{n+-} (0 for E0 and degenerate limits)
    bool degenerate_limit{false}; // g = 0: C diverges or vanishes, basis state chosen by continuity
};

// (C|n,+> + |n+1,->)/sqrt(1+C^2) with C = sum_{o<=order} C^(o). Requires n+1 <= n_cutoff.
AnalyticMode analytic_eigenvector(const ModelParams& p, LevelKey key, int order, const Truncation& trunc);

struct ExtendedFloquetMatrix {
    int m_max{0};
    Eigen::Index block_dim{0};
    double Omega{1.0};
    Operator matrix;  // ((2 m_max + 1) D)^2, harmonic index m = -m_max..m_max in order

    Eigen::Index dim() const { return matrix.rows(); }
    Operator block(int m_row, int m_col) const;
};

ExtendedFloquetMatrix extended_floquet_matrix(const FourierHamiltonian& fc, const Truncation& trunc);

struct NumericSpectrum {
    double Omega{1.0};
    std::vector<QuasiEnergyLevel> levels;    // ascending folded value
    std::vector<State> modes;                // normalised m = 0 block of each eigenvector
    std::vector<double> zero_block_weight;   // weight of the m = 0 block
    std::vector<double> parity_expectation;  // <(-1)^N> over the whole extended eigenvector
    std::vector<double> label_overlap;       // best analytic overlap (0 before labelling)
};

// Physical representatives: the D eigenvectors with the largest m = 0 weight.
NumericSpectrum numeric_quasi_energies(const FourierHamiltonian& fc, const Truncation& trunc);

// Assign (n, branch, parity) to each numeric level from its best overlap with the
// analytic modes E0, E_{n+-} (n <= n_cutoff - 1); labels below `threshold` are dropped.
void label_numeric_levels(NumericSpectrum& spec, const ModelParams& p, const Truncation& trunc, int order = 2,
                          double threshold = 0.5);

// Index of the numeric level with the largest overlap with the given analytic mode.
std::size_t best_numeric_match(const NumericSpectrum& spec, const State& mode);

enum class GapMode { analytic_formula, numeric_limit };

// delta_E = E_{0+} - E_{0-} as g -> 0. Analytic: Delta (AiRM) or
// Delta + 2 (Omega - Delta)(eps/Omega)^2 (AsRM). Numeric: extended-space levels at g = 1e-4.
double detuning_gap(const ModelParams& p, GapMode mode, const Truncation& trunc = Truncation{4, 10});

}  // namespace rabi_floquet

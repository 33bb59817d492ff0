// hfe.hpp: high-frequency (inverse-frequency) expansion of a periodically driven
// Hamiltonian: effective Hamiltonian H_eff = H^(0) + H^(1) + H^(2) and the
// non-stroboscopic kick operator K(t) = K^(1)(t) + K^(2)(t).
//
// Two independent routes are provided:
//   * the generic engine works on any FourierHamiltonian by evaluating the
//     commutator sums directly;
//   * closed_form_expansion assembles the known operator expressions for the
//     AiRM and AsRM without evaluating any commutator.
// Both must agree; the test suite holds them to 1e-12.

#pragma once

#include "rabi_floquet/hilbert.hpp"
#include "rabi_floquet/models.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace rabi_floquet {

using HarmonicMap = std::map<int, Operator>;

struct EffectiveExpansion {
    double Omega{1.0};
    std::array<Operator, 3> h_orders;       // H^(0), H^(1), H^(2)
    std::array<HarmonicMap, 2> kick;        // kick[o-1]: G_{o,l}, K^(o)(t) = sum_l G_{o,l} e^{i l Omega t}

    Operator effective_hamiltonian(int max_order = 2) const;
    const HarmonicMap& kick_harmonics(int order) const;
};

// Orders 0..order of H_eff. Throws std::invalid_argument for order outside 0..2.
std::vector<Operator> effective_hamiltonian_generic(const FourierHamiltonian& fc, int order);

// Harmonic coefficients of K^(order)(t) only. order must be 1 or 2.
// Harmonics that cancel exactly are omitted.
HarmonicMap kick_harmonics_generic(const FourierHamiltonian& fc, int order);

// Generic engine on the given matrices as they are.
EffectiveExpansion generic_expansion(const FourierHamiltonian& fc);

// Generic engine evaluated on a truncation padded by two Fock levels and
// restricted back, which removes hard-truncation artefacts on the top level.
EffectiveExpansion generic_expansion(const ModelParams& p, const Truncation& trunc);

// Closed operator forms. omega_override replaces the drive frequency in every
// 1/Omega factor (used for order-of-accuracy studies).
EffectiveExpansion closed_form_expansion(const ModelParams& p, const Truncation& trunc,
                                         std::optional<double> omega_override = std::nullopt);

// K(t) summed over orders 1..max_order. Zero matrix when there are no harmonics.
Operator kick_operator_at(const EffectiveExpansion& exp, double t, int max_order = 2);

// max |A_l - B_l| over the union of harmonics (missing entries count as zero).
double harmonic_map_distance(const HarmonicMap& A, const HarmonicMap& B);

}  // namespace rabi_floquet

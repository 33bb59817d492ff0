// models.hpp: anisotropic (AiRM) and asymmetric (AsRM) Rabi models
//
// Natural units: hbar = 1, field frequency omega = 1. Every parameter is a ratio
// to omega (delta = omega_0 - omega, couplings and bias in units of hbar*omega).

#pragma once

#include "rabi_floquet/hilbert.hpp"

#include <map>
#include <string>
#include <string_view>

namespace rabi_floquet {

enum class ModelKind { airm, asrm };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ModelParams {
    ModelKind model{ModelKind::airm};
    double delta{0.0};
    double g{0.0};        // rotating-wave coupling
    double g_prime{0.0};  // counter-rotating coupling (AsRM: always equal to g)
    double epsilon{0.0};  // transverse bias (AiRM: always 0)

    static ModelParams airm(double delta, double g, double g_prime);
    static ModelParams asrm(double delta, double g, double epsilon);

    double omega0() const noexcept { return 1.0 + delta; }
    // Omega = 2 omega for AiRM (CRT phase e^{2i omega t}), Omega = omega for AsRM.
    double drive_frequency() const noexcept { return model == ModelKind::airm ? 2.0 : 1.0; }
    double period() const noexcept;

    // Throws std::invalid_argument for negative couplings or inconsistent model fields.
    void validate() const;
};

// H(t) = sum_l H_l e^{i l Omega t}. Only non-vanishing harmonics are stored.
struct FourierHamiltonian {
    double Omega{1.0};
    std::map<int, Operator> components;

    const Operator& h0() const;
    bool has(int l) const { return components.count(l) != 0; }
    int max_harmonic() const;
    Eigen::Index dim() const { return h0().rows(); }
};

Operator lab_hamiltonian(const ModelParams& p, const Truncation& trunc);

FourierHamiltonian rotating_components(const ModelParams& p, const Truncation& trunc);

Operator rotating_hamiltonian_at(const FourierHamiltonian& fc, double t);

// V(t) = exp[-i (a^dag a + sigma_z / 2) t], diagonal.
Operator gauge_transform(double t, const Truncation& trunc);

// Diagonal of a^dag a + sigma_z/2 (the generator of V).
Eigen::VectorXd frame_generator_diagonal(const Truncation& trunc);

}  // namespace rabi_floquet

// hilbert.hpp: truncated Fock ⊗ two-level space and the operators acting on it
//
// Basis convention: index k = 2n + s, with s = 0 for |n,-> and s = 1 for |n,+>.
// The spin index runs fastest, so the pair {|n,+>, |n+1,->} sits at k = 2n+1, 2n+2.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace rabi_floquet {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

enum class Spin : int { down = 0, up = 1 };

struct Truncation {
    int n_cutoff{4};  // highest retained Fock number
    int m_max{10};    // Floquet harmonics -m_max..m_max (extended space only)

    Truncation() = default;
    explicit Truncation(int n_cutoff, int m_max = 10);

    Eigen::Index dim() const noexcept { return 2 * (n_cutoff + 1); }
    Truncation padded(int extra_fock) const { return Truncation(n_cutoff + extra_fock, m_max); }
};

inline Eigen::Index basis_index(int n, Spin s) noexcept {
    return 2 * static_cast<Eigen::Index>(n) + static_cast<int>(s);
}

State basis_state(int n, Spin s, const Truncation& trunc);

struct LadderOps {
    Operator a;
    Operator a_dag;
};

struct SpinOps {
    Operator sx, sy, sz;
    Operator sp, sm;  // sigma_+ = |+><-|, sigma_- = |-><+|
};

// a|n,s> = sqrt(n)|n-1,s>; a_dag is the exact adjoint, so a_dag|n_cutoff,s> = 0.
LadderOps build_ladder_ops(const Truncation& trunc);
SpinOps build_spin_ops(const Truncation& trunc);

// Throws std::invalid_argument on dimension mismatch.
Operator commutator(const Operator& A, const Operator& B);

// N = a^dag a + (sigma_z + 1)/2, diagonal.
Operator total_excitation(const Truncation& trunc);
// exp(i pi N) = (-1)^N, diagonal.
Operator parity_operator(const Truncation& trunc);

// Poisson weight of Fock states above n_cutoff for a coherent state with mean |alpha|^2.
double coherent_tail_weight(double mean_photons, int n_cutoff);

// |alpha> ⊗ |spin>, amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!) renormalised after
// truncation. Writes a warning to std::clog when the discarded weight exceeds 1e-3.
State coherent_state(cplx alpha, const Truncation& trunc, Spin spin = Spin::up);

double max_abs(const Operator& A);
bool is_hermitian(const Operator& A, double tol = 1e-12);

// Leading block of A on a smaller truncation (A must live on a truncation >= trunc).
Operator restrict_to(const Operator& A, const Truncation& trunc);

}  // namespace rabi_floquet

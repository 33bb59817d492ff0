#include "rabi_floquet/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

namespace rabi_floquet {

Truncation::Truncation(int n_cutoff_, int m_max_) : n_cutoff(n_cutoff_), m_max(m_max_) {
    if (n_cutoff < 1) {
        throw std::invalid_argument("Truncation: n_cutoff must be >= 1, got " + std::to_string(n_cutoff));
    }
    if (m_max < 1) {
        throw std::invalid_argument("Truncation: m_max must be >= 1, got " + std::to_string(m_max));
    }
}

State basis_state(int n, Spin s, const Truncation& trunc) {
    if (n < 0 || n > trunc.n_cutoff) {
        throw std::out_of_range("basis_state: Fock number outside truncation");
    }
    State v = State::Zero(trunc.dim());
    v(basis_index(n, s)) = 1.0;
    return v;
}

LadderOps build_ladder_ops(const Truncation& trunc) {
    const Eigen::Index D = trunc.dim();
    Operator a = Operator::Zero(D, D);
    for (int n = 1; n <= trunc.n_cutoff; ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (Spin s : {Spin::down, Spin::up}) {
            a(basis_index(n - 1, s), basis_index(n, s)) = amp;
        }
    }
    Operator a_dag = a.adjoint();
    return {std::move(a), std::move(a_dag)};
}

SpinOps build_spin_ops(const Truncation& trunc) {
    const Eigen::Index D = trunc.dim();
    SpinOps ops;
    ops.sp = Operator::Zero(D, D);
    ops.sz = Operator::Zero(D, D);
    for (int n = 0; n <= trunc.n_cutoff; ++n) {
        ops.sp(basis_index(n, Spin::up), basis_index(n, Spin::down)) = 1.0;
        ops.sz(basis_index(n, Spin::up), basis_index(n, Spin::up)) = 1.0;
        ops.sz(basis_index(n, Spin::down), basis_index(n, Spin::down)) = -1.0;
    }
    ops.sm = ops.sp.adjoint();
    ops.sx = ops.sp + ops.sm;
    ops.sy = cplx(0.0, -1.0) * (ops.sp - ops.sm);
    return ops;
}

Operator commutator(const Operator& A, const Operator& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
        throw std::invalid_argument("commutator: dimension mismatch");
    }
    return A * B - B * A;
}

Operator total_excitation(const Truncation& trunc) {
    const Eigen::Index D = trunc.dim();
    Operator N = Operator::Zero(D, D);
    for (int n = 0; n <= trunc.n_cutoff; ++n) {
        N(basis_index(n, Spin::down), basis_index(n, Spin::down)) = static_cast<double>(n);
        N(basis_index(n, Spin::up), basis_index(n, Spin::up)) = static_cast<double>(n + 1);
    }
    return N;
}

Operator parity_operator(const Truncation& trunc) {
    const Eigen::Index D = trunc.dim();
    Operator P = Operator::Zero(D, D);
    for (int n = 0; n <= trunc.n_cutoff; ++n) {
        P(basis_index(n, Spin::down), basis_index(n, Spin::down)) = (n % 2 == 0) ? 1.0 : -1.0;
        P(basis_index(n, Spin::up), basis_index(n, Spin::up)) = (n % 2 == 0) ? -1.0 : 1.0;
    }
    return P;
}

double coherent_tail_weight(double mean_photons, int n_cutoff) {
    // Sum the retained Poisson terms by recursion, subtract from one.
    double term = std::exp(-mean_photons);
    double kept = term;
    for (int n = 1; n <= n_cutoff; ++n) {
        term *= mean_photons / n;
        kept += term;
    }
    return std::max(0.0, 1.0 - kept);
}

State coherent_state(cplx alpha, const Truncation& trunc, Spin spin) {
    const double mean = std::norm(alpha);
    State psi = State::Zero(trunc.dim());
    cplx c = std::exp(-0.5 * mean);
    for (int n = 0; n <= trunc.n_cutoff; ++n) {
        if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
        psi(basis_index(n, spin)) = c;
    }
    const double tail = coherent_tail_weight(mean, trunc.n_cutoff);
    if (tail > 1e-3) {
        std::clog << "warning: coherent state |alpha|^2=" << mean << " loses Poisson weight " << tail
                  << " above n_cutoff=" << trunc.n_cutoff << '\n';
    }
    psi.normalize();
    return psi;
}

double max_abs(const Operator& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Operator& A, double tol) {
    return A.rows() == A.cols() && max_abs(A - A.adjoint()) < tol;
}

Operator restrict_to(const Operator& A, const Truncation& trunc) {
    const Eigen::Index D = trunc.dim();
    if (A.rows() < D || A.cols() < D) {
        throw std::invalid_argument("restrict_to: operator smaller than target truncation");
    }
    return A.topLeftCorner(D, D);
}

}  // namespace rabi_floquet

#include "rabi_floquet/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rabi_floquet {

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::plus: return "plus";
        case Branch::minus: return "minus";
        case Branch::zero: return "zero";
    }
    return "?";
}

std::string_view to_string(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        case Parity::none: return "none";
    }
    return "?";
}

std::string LevelKey::label() const {
    if (branch == Branch::zero) return "E0";
    return "E" + std::to_string(n) + (branch == Branch::plus ? "+" : "-");
}

std::optional<LevelKey> QuasiEnergyLevel::key() const {
    if (!n) return std::nullopt;
    return LevelKey{*n, branch};
}

RabiFrequencies rabi_frequencies(const ModelParams& p, int n) {
    if (n < 0) throw std::invalid_argument("rabi_frequencies: n must be >= 0");
    const double n1 = n + 1.0;
    RabiFrequencies r;
    r.rabi = std::sqrt(p.delta * p.delta + 4.0 * p.g * p.g * n1);
    if (p.model == ModelKind::asrm) r.bias = std::sqrt(2.0 * p.epsilon * p.epsilon + p.g * p.g * n1);
    return r;
}

double fold_to_first_bz(double E, double Omega) {
    if (!(Omega > 0.0)) throw std::invalid_argument("fold_to_first_bz: Omega must be > 0");
    double r = E - Omega * std::floor(E / Omega + 0.5);
    const double half = 0.5 * Omega;
    if (r >= half) r -= Omega;
    if (r < -half) r += Omega;
    return r;
}

double folded_difference(double a, double b, double Omega) { return fold_to_first_bz(a - b, Omega); }

std::array<double, 3> quasi_energy_terms(const ModelParams& p, LevelKey key, std::optional<double> omega_override) {
    p.validate();
    const double W = omega_override.value_or(p.drive_frequency());
    const double W2 = W * W;
    const double D = p.delta;
    const double g = p.g;

    if (key.branch == Branch::zero) {
        if (p.model == ModelKind::airm) {
            const double gp2 = p.g_prime * p.g_prime;
            return {-0.5 * D, -gp2 / W, D * gp2 / W2};
        }
        const double e2 = p.epsilon * p.epsilon;
        return {-0.5 * D, -(e2 + 0.5 * g * g) / W, D * (e2 + 0.25 * g * g) / W2};
    }

    if (key.n < 0) throw std::invalid_argument("quasi_energy_terms: n must be >= 0");
    const double sgn = key.branch == Branch::plus ? 1.0 : -1.0;
    const double n1 = key.n + 1.0;
    const double OR = rabi_frequencies(p, key.n).rabi;
    // Terms divided by the Rabi frequency drop out in the fully degenerate point Delta = g = 0.
    const double inv_OR = OR > 0.0 ? 1.0 / OR : 0.0;

    if (p.model == ModelKind::airm) {
        const double gp = p.g_prime;
        const double gp2 = gp * gp;
        const double e1 = (gp2 / W) * (-1.0 + sgn * D * n1 * inv_OR);
        const double dgn = D * gp * n1;
        const double e2 = (gp2 / W2) * (D - sgn * dgn * dgn * inv_OR * inv_OR * inv_OR +
                                        sgn * ((gp2 - 2.0 * g * g) * n1 * n1 - D * D * n1) * inv_OR);
        return {sgn * 0.5 * OR, e1, e2};
    }

    const double Oe2 = 2.0 * p.epsilon * p.epsilon + g * g * n1;
    const double e1 = (-g * g + sgn * D * Oe2 * inv_OR) / (2.0 * W);
    const double bracket = Oe2 * Oe2 - 8.0 * Oe2 * g * g * n1 + 6.0 * std::pow(g, 4) * n1 * n1 -
                           D * D * (2.0 * Oe2 + Oe2 * Oe2 * inv_OR * inv_OR - g * g * n1);
    const double e2 = (D * g * g + sgn * bracket * inv_OR) / (4.0 * W2);
    return {sgn * 0.5 * OR, e1, e2};
}

QuasiEnergyLevel analytic_quasi_energy(const ModelParams& p, LevelKey key, int order,
                                       std::optional<double> omega_override) {
    if (order < 0 || order > 2) throw std::invalid_argument("analytic_quasi_energy: order must be 0..2");
    const auto terms = quasi_energy_terms(p, key, omega_override);
    double E = 0.0;
    for (int o = 0; o <= order; ++o) E += terms[o];

    QuasiEnergyLevel level;
    level.value_unfolded = E;
    level.value_folded = fold_to_first_bz(E, omega_override.value_or(p.drive_frequency()));
    level.n = key.n;
    level.branch = key.branch;
    level.parity = key.parity();
    level.provenance = Provenance::analytic;
    return level;
}

std::vector<QuasiEnergyLevel> analytic_levels(const ModelParams& p, int max_pair_n, int order) {
    std::vector<QuasiEnergyLevel> out;
    out.push_back(analytic_quasi_energy(p, LevelKey::ground(), order));
    for (int n = 0; n <= max_pair_n; ++n) {
        out.push_back(analytic_quasi_energy(p, {n, Branch::plus}, order));
        out.push_back(analytic_quasi_energy(p, {n, Branch::minus}, order));
    }
    return out;
}

AnalyticMode analytic_eigenvector(const ModelParams& p, LevelKey key, int order, const Truncation& trunc) {
    p.validate();
    if (order < 0 || order > 2) throw std::invalid_argument("analytic_eigenvector: order must be 0..2");
    AnalyticMode mode;
    if (key.branch == Branch::zero) {
        mode.state = basis_state(0, Spin::down, trunc);
        return mode;
    }
    if (key.n < 0 || key.n + 1 > trunc.n_cutoff) {
        throw std::out_of_range("analytic_eigenvector: pair |n,+>,|n+1,-> outside truncation");
    }

    const State up = basis_state(key.n, Spin::up, trunc);
    const State down = basis_state(key.n + 1, Spin::down, trunc);
    const bool plus = key.branch == Branch::plus;
    const double D = p.delta;
    const double g = p.g;

    if (g == 0.0) {
        mode.degenerate_limit = true;
        if (D > 0.0) {
            mode.state = plus ? up : down;
        } else if (D < 0.0) {
            mode.state = plus ? down : up;
        } else {
            mode.coefficient = plus ? 1.0 : -1.0;
            mode.state = (mode.coefficient * up + down) / std::sqrt(2.0);
        }
        return mode;
    }

    const double W = p.drive_frequency();
    const double sgn = plus ? 1.0 : -1.0;
    const double n1 = key.n + 1.0;
    const double sq = std::sqrt(n1);
    const double OR = rabi_frequencies(p, key.n).rabi;

    std::array<double, 3> C{};
    C[0] = (D + sgn * OR) / (2.0 * g * sq);
    if (p.model == ModelKind::airm) {
        const double gp2 = p.g_prime * p.g_prime;
        C[1] = (gp2 * sq / g) * (1.0 + sgn * D / OR) / W;
        C[2] = (gp2 * sq / (2.0 * g)) *
               (-D - sgn * D * D / OR + sgn * 8.0 * gp2 * g * g * n1 * n1 / (OR * OR * OR)) / (W * W);
    } else {
        const double e2 = p.epsilon * p.epsilon;
        const double Oe2 = 2.0 * e2 + g * g * n1;
        C[1] = (e2 + 0.5 * g * g * n1 + sgn * D * Oe2 / (2.0 * OR)) / (g * sq * W);
        C[2] = g * sq * (-D / 8.0 - sgn * D * D / (8.0 * OR) + sgn * Oe2 * Oe2 / (OR * OR * OR)) / (W * W);
    }
    double c = 0.0;
    for (int o = 0; o <= order; ++o) c += C[o];
    mode.coefficient = c;
    mode.state = (c * up + down) / std::sqrt(1.0 + c * c);
    return mode;
}

Operator ExtendedFloquetMatrix::block(int m_row, int m_col) const {
    const Eigen::Index r = (m_row + m_max) * block_dim;
    const Eigen::Index c = (m_col + m_max) * block_dim;
    return matrix.block(r, c, block_dim, block_dim);
}

ExtendedFloquetMatrix extended_floquet_matrix(const FourierHamiltonian& fc, const Truncation& trunc) {
    const int lmax = fc.max_harmonic();
    if (trunc.m_max < lmax) {
        throw std::invalid_argument("extended_floquet_matrix: m_max smaller than the largest drive harmonic");
    }
    ExtendedFloquetMatrix F;
    F.m_max = trunc.m_max;
    F.block_dim = fc.dim();
    F.Omega = fc.Omega;
    const Eigen::Index D = F.block_dim;
    const int M = 2 * trunc.m_max + 1;
    F.matrix = Operator::Zero(M * D, M * D);
    for (int i = 0; i < M; ++i) {
        const int m_row = i - trunc.m_max;
        for (int j = 0; j < M; ++j) {
            const int m_col = j - trunc.m_max;
            auto it = fc.components.find(m_row - m_col);
            if (it != fc.components.end()) F.matrix.block(i * D, j * D, D, D) = it->second;
        }
        F.matrix.block(i * D, i * D, D, D).diagonal().array() += m_row * fc.Omega;
    }
    return F;
}

NumericSpectrum numeric_quasi_energies(const FourierHamiltonian& fc, const Truncation& trunc) {
    const ExtendedFloquetMatrix F = extended_floquet_matrix(fc, trunc);
    Eigen::SelfAdjointEigenSolver<Operator> solver(F.matrix);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "numeric_quasi_energies: eigensolver failed (dim=" << F.dim() << ", m_max=" << F.m_max
            << ", |F|_max=" << max_abs(F.matrix) << ", hermiticity defect=" << max_abs(F.matrix - F.matrix.adjoint())
            << ")";
        throw NumericalFailure(msg.str());
    }
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const Operator& evecs = solver.eigenvectors();
    const Eigen::Index D = F.block_dim;
    const Eigen::Index total = F.dim();
    const Eigen::Index zero_row = static_cast<Eigen::Index>(trunc.m_max) * D;

    std::vector<double> weight(total);
    for (Eigen::Index k = 0; k < total; ++k) weight[k] = evecs.col(k).segment(zero_row, D).squaredNorm();

    std::vector<Eigen::Index> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return weight[a] > weight[b]; });
    order.resize(D);

    // Diagonal of (-1)^N repeated over every harmonic block.
    Eigen::VectorXd parity_diag(D);
    {
        const Operator P = parity_operator(Truncation(static_cast<int>(D / 2 - 1), trunc.m_max));
        parity_diag = P.diagonal().real();
    }

    struct Entry {
        QuasiEnergyLevel level;
        State mode;
        double weight;
        double parity;
    };
    std::vector<Entry> entries;
    entries.reserve(D);
    for (Eigen::Index k : order) {
        Entry e;
        e.level.value_unfolded = evals(k);
        e.level.value_folded = fold_to_first_bz(evals(k), fc.Omega);
        e.level.provenance = Provenance::numeric;
        e.level.parity = Parity::none;
        e.weight = weight[k];
        e.mode = evecs.col(k).segment(zero_row, D);
        if (e.weight > 0.0) e.mode /= std::sqrt(e.weight);
        double par = 0.0;
        for (Eigen::Index i = 0; i < total; ++i) par += std::norm(evecs(i, k)) * parity_diag(i % D);
        e.parity = par;
        entries.push_back(std::move(e));
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.level.value_folded < b.level.value_folded; });

    NumericSpectrum out;
    out.Omega = fc.Omega;
    for (auto& e : entries) {
        out.levels.push_back(e.level);
        out.modes.push_back(std::move(e.mode));
        out.zero_block_weight.push_back(e.weight);
        out.parity_expectation.push_back(e.parity);
        out.label_overlap.push_back(0.0);
    }
    return out;
}

void label_numeric_levels(NumericSpectrum& spec, const ModelParams& p, const Truncation& trunc, int order,
                          double threshold) {
    std::vector<LevelKey> keys{LevelKey::ground()};
    for (int n = 0; n + 1 <= trunc.n_cutoff; ++n) {
        keys.push_back({n, Branch::plus});
        keys.push_back({n, Branch::minus});
    }
    std::vector<State> modes;
    modes.reserve(keys.size());
    for (const auto& k : keys) modes.push_back(analytic_eigenvector(p, k, order, trunc).state);

    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        double best = -1.0;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const double ov = std::norm(modes[k].dot(spec.modes[i]));
            if (ov > best) {
                best = ov;
                best_k = k;
            }
        }
        auto& level = spec.levels[i];
        spec.label_overlap[i] = best;
        if (best >= threshold) {
            level.n = keys[best_k].n;
            level.branch = keys[best_k].branch;
            level.parity = keys[best_k].parity();
        } else {
            level.n.reset();
            level.branch = Branch::zero;
            level.parity = Parity::none;
        }
    }
}

std::size_t best_numeric_match(const NumericSpectrum& spec, const State& mode) {
    std::size_t best_i = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
        const double ov = std::norm(mode.dot(spec.modes[i]));
        if (ov > best) {
            best = ov;
            best_i = i;
        }
    }
    return best_i;
}

double detuning_gap(const ModelParams& p, GapMode mode, const Truncation& trunc) {
    p.validate();
    if (mode == GapMode::analytic_formula) {
        if (p.model == ModelKind::airm) return p.delta;
        const double W = p.drive_frequency();
        const double r = p.epsilon / W;
        return p.delta + 2.0 * (W - p.delta) * r * r;
    }
    ModelParams weak = p;
    weak.g = 1e-4;
    if (weak.model == ModelKind::asrm) weak.g_prime = weak.g;
    const NumericSpectrum spec = numeric_quasi_energies(rotating_components(weak, trunc), trunc);
    const auto i_plus = best_numeric_match(spec, analytic_eigenvector(weak, {0, Branch::plus}, 2, trunc).state);
    const auto i_minus = best_numeric_match(spec, analytic_eigenvector(weak, {0, Branch::minus}, 2, trunc).state);
    if (i_plus == i_minus) {
        throw NumericalFailure("detuning_gap: E0+ and E0- matched the same numeric level");
    }
    return spec.levels[i_plus].value_folded - spec.levels[i_minus].value_folded;
}

}  // namespace rabi_floquet

#include "rabi_floquet/models.hpp"

#include <cmath>
#include <numbers>

namespace rabi_floquet {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::airm ? "airm" : "asrm"; }

ModelKind parse_model_kind(std::string_view text) {
    if (text == "airm" || text == "AiRM") return ModelKind::airm;
    if (text == "asrm" || text == "AsRM") return ModelKind::asrm;
    throw std::invalid_argument("unknown model '" + std::string(text) + "' (expected airm or asrm)");
}

ModelParams ModelParams::airm(double delta, double g, double g_prime) {
    ModelParams p;
    p.model = ModelKind::airm;
    p.delta = delta;
    p.g = g;
    p.g_prime = g_prime;
    p.validate();
    return p;
}

ModelParams ModelParams::asrm(double delta, double g, double epsilon) {
    ModelParams p;
    p.model = ModelKind::asrm;
    p.delta = delta;
    p.g = g;
    p.g_prime = g;
    p.epsilon = epsilon;
    p.validate();
    return p;
}

double ModelParams::period() const noexcept { return 2.0 * std::numbers::pi / drive_frequency(); }

void ModelParams::validate() const {
    if (!(g >= 0.0) || !(g_prime >= 0.0) || !(epsilon >= 0.0)) {
        throw std::invalid_argument("ModelParams: g, g_prime and epsilon must be >= 0");
    }
    if (!std::isfinite(delta)) throw std::invalid_argument("ModelParams: delta must be finite");
    if (model == ModelKind::airm && epsilon != 0.0) {
        throw std::invalid_argument("ModelParams: AiRM has no bias field (epsilon must be 0)");
    }
    if (model == ModelKind::asrm && g_prime != g) {
        throw std::invalid_argument("ModelParams: AsRM couples with g_prime == g");
    }
}

const Operator& FourierHamiltonian::h0() const {
    auto it = components.find(0);
    if (it == components.end()) throw std::logic_error("FourierHamiltonian: missing l = 0 component");
    return it->second;
}

int FourierHamiltonian::max_harmonic() const {
    int lmax = 0;
    for (const auto& [l, H] : components) lmax = std::max(lmax, std::abs(l));
    return lmax;
}

Operator lab_hamiltonian(const ModelParams& p, const Truncation& trunc) {
    p.validate();
    const auto [a, ad] = build_ladder_ops(trunc);
    const SpinOps s = build_spin_ops(trunc);
    Operator H = 0.5 * p.omega0() * s.sz + ad * a;
    if (p.model == ModelKind::airm) {
        H += p.g * (ad * s.sm + a * s.sp) + p.g_prime * (ad * s.sp + a * s.sm);
    } else {
        H += p.epsilon * s.sx + p.g * (ad + a) * s.sx;
    }
    return H;
}

FourierHamiltonian rotating_components(const ModelParams& p, const Truncation& trunc) {
    p.validate();
    const auto [a, ad] = build_ladder_ops(trunc);
    const SpinOps s = build_spin_ops(trunc);

    FourierHamiltonian fc;
    fc.Omega = p.drive_frequency();
    fc.components[0] = 0.5 * p.delta * s.sz + p.g * (ad * s.sm + a * s.sp);

    const Operator raise = ad * s.sp;
    const Operator lower = a * s.sm;
    if (p.model == ModelKind::airm) {
        if (p.g_prime != 0.0) {
            fc.components[1] = p.g_prime * raise;
            fc.components[-1] = p.g_prime * lower;
        }
    } else {
        if (p.epsilon != 0.0) {
            fc.components[1] = p.epsilon * s.sp;
            fc.components[-1] = p.epsilon * s.sm;
        }
        if (p.g != 0.0) {
            fc.components[2] = p.g * raise;
            fc.components[-2] = p.g * lower;
        }
    }
    return fc;
}

Operator rotating_hamiltonian_at(const FourierHamiltonian& fc, double t) {
    Operator H = Operator::Zero(fc.dim(), fc.dim());
    for (const auto& [l, Hl] : fc.components) {
        H += std::polar(1.0, l * fc.Omega * t) * Hl;
    }
    return H;
}

Eigen::VectorXd frame_generator_diagonal(const Truncation& trunc) {
    Eigen::VectorXd d(trunc.dim());
    for (int n = 0; n <= trunc.n_cutoff; ++n) {
        d(basis_index(n, Spin::down)) = n - 0.5;
        d(basis_index(n, Spin::up)) = n + 0.5;
    }
    return d;
}

Operator gauge_transform(double t, const Truncation& trunc) {
    const Eigen::VectorXd d = frame_generator_diagonal(trunc);
    Eigen::VectorXcd phases(d.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) phases(k) = std::polar(1.0, -d(k) * t);
    return phases.asDiagonal();
}

}  // namespace rabi_floquet

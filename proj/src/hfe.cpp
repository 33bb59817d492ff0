#include "rabi_floquet/hfe.hpp"

#include <cmath>
#include <string>

namespace rabi_floquet {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kGenericPadding = 2;

void check_order(int order, int lo, int hi, const char* what) {
    if (order < lo || order > hi) {
        throw std::invalid_argument(std::string(what) + ": unsupported expansion order " + std::to_string(order) +
                                    " (supported " + std::to_string(lo) + ".." + std::to_string(hi) + ")");
    }
}

void accumulate(HarmonicMap& map, int l, const Operator& term) {
    auto it = map.find(l);
    if (it == map.end()) {
        map.emplace(l, term);
    } else {
        it->second += term;
    }
}

void prune_zeros(HarmonicMap& map) {
    for (auto it = map.begin(); it != map.end();) {
        it = max_abs(it->second) == 0.0 ? map.erase(it) : std::next(it);
    }
}

// Drive harmonics l != 0 paired with their conjugates.
std::vector<int> drive_harmonics(const FourierHamiltonian& fc) {
    std::vector<int> ls;
    for (const auto& [l, H] : fc.components) {
        if (l == 0) continue;
        if (!fc.has(-l)) throw std::invalid_argument("FourierHamiltonian: harmonic without conjugate partner");
        ls.push_back(l);
    }
    return ls;
}

}  // namespace

Operator EffectiveExpansion::effective_hamiltonian(int max_order) const {
    check_order(max_order, 0, 2, "effective_hamiltonian");
    Operator H = h_orders[0];
    for (int o = 1; o <= max_order; ++o) H += h_orders[o];
    return H;
}

const HarmonicMap& EffectiveExpansion::kick_harmonics(int order) const {
    check_order(order, 1, 2, "kick_harmonics");
    return kick[order - 1];
}

std::vector<Operator> effective_hamiltonian_generic(const FourierHamiltonian& fc, int order) {
    check_order(order, 0, 2, "effective_hamiltonian_generic");
    const Operator& H0 = fc.h0();
    const double W = fc.Omega;
    const auto ls = drive_harmonics(fc);

    std::vector<Operator> out{H0};
    if (order >= 1) {
        Operator H1 = Operator::Zero(H0.rows(), H0.cols());
        for (int l : ls) {
            if (l > 0) H1 += commutator(fc.components.at(l), fc.components.at(-l)) / static_cast<double>(l);
        }
        out.push_back(H1 / W);
    }
    if (order >= 2) {
        Operator H2 = Operator::Zero(H0.rows(), H0.cols());
        for (int l : ls) {
            const Operator& Hl = fc.components.at(l);
            H2 += commutator(commutator(Hl, H0), fc.components.at(-l)) / (2.0 * l * l);
            for (int lp : ls) {
                if (lp == -l || !fc.has(-(l + lp))) continue;
                H2 += commutator(commutator(Hl, fc.components.at(lp)), fc.components.at(-(l + lp))) /
                      (3.0 * l * (l + lp));
            }
        }
        out.push_back(H2 / (W * W));
    }
    return out;
}

HarmonicMap kick_harmonics_generic(const FourierHamiltonian& fc, int order) {
    check_order(order, 1, 2, "kick_harmonics_generic");
    const double W = fc.Omega;
    const auto ls = drive_harmonics(fc);
    HarmonicMap G;
    if (order == 1) {
        for (int l : ls) accumulate(G, l, fc.components.at(l) / (kI * W * static_cast<double>(l)));
    } else {
        const Operator& H0 = fc.h0();
        for (int l : ls) {
            const Operator& Hl = fc.components.at(l);
            accumulate(G, l, commutator(Hl, H0) / (kI * W * W * static_cast<double>(l * l)));
            for (int lp : ls) {
                if (lp == -l) continue;
                accumulate(G, l + lp,
                           commutator(Hl, fc.components.at(lp)) / (2.0 * kI * W * W * static_cast<double>(l * (l + lp))));
            }
        }
    }
    prune_zeros(G);
    return G;
}

EffectiveExpansion generic_expansion(const FourierHamiltonian& fc) {
    EffectiveExpansion e;
    e.Omega = fc.Omega;
    auto h = effective_hamiltonian_generic(fc, 2);
    for (int o = 0; o < 3; ++o) e.h_orders[o] = std::move(h[o]);
    e.kick[0] = kick_harmonics_generic(fc, 1);
    e.kick[1] = kick_harmonics_generic(fc, 2);
    return e;
}

EffectiveExpansion generic_expansion(const ModelParams& p, const Truncation& trunc) {
    EffectiveExpansion padded = generic_expansion(rotating_components(p, trunc.padded(kGenericPadding)));
    EffectiveExpansion e;
    e.Omega = padded.Omega;
    for (int o = 0; o < 3; ++o) e.h_orders[o] = restrict_to(padded.h_orders[o], trunc);
    for (int o = 0; o < 2; ++o) {
        for (const auto& [l, G] : padded.kick[o]) e.kick[o].emplace(l, restrict_to(G, trunc));
        prune_zeros(e.kick[o]);
    }
    return e;
}

EffectiveExpansion closed_form_expansion(const ModelParams& p, const Truncation& trunc,
                                         std::optional<double> omega_override) {
    p.validate();
    const auto [a, ad] = build_ladder_ops(trunc);
    const SpinOps s = build_spin_ops(trunc);
    const double W = omega_override.value_or(p.drive_frequency());
    const double W2 = W * W;
    const double D = p.delta;
    const double g = p.g;
    const Eigen::Index dim = trunc.dim();

    // Recurring operator shapes.
    const Operator shift = ad * a * s.sz - s.sm * s.sp;  // a^dag a sigma_z - sigma_- sigma_+
    const Operator two_photon = ad * a * ad * s.sm;      // a^dag a a^dag sigma_-
    const Operator rwt = ad * s.sm + a * s.sp;
    const Operator ad2_sz = ad * ad * s.sz;
    const Operator ad_sp = ad * s.sp;

    EffectiveExpansion e;
    e.Omega = W;
    e.h_orders[0] = 0.5 * D * s.sz + g * rwt;

    auto add_pair = [](HarmonicMap& map, int l, const Operator& G) {
        if (max_abs(G) == 0.0) return;
        map[l] = G;
        map[-l] = G.adjoint();
    };

    if (p.model == ModelKind::airm) {
        const double gp2 = p.g_prime * p.g_prime;
        e.h_orders[1] = (gp2 / W) * shift;
        e.h_orders[2] = -(gp2 / W2) * (D * shift + g * (two_photon + Operator(two_photon.adjoint())));
        add_pair(e.kick[0], 1, (p.g_prime / (kI * W)) * ad_sp);
        add_pair(e.kick[1], 1, (p.g_prime / (kI * W2)) * (g * ad2_sz - D * ad_sp));
    } else {
        const double e2 = p.epsilon * p.epsilon;
        const double g2 = g * g;
        e.h_orders[1] = (1.0 / W) * (e2 * s.sz + 0.5 * g2 * shift);
        e.h_orders[2] = -(1.0 / W2) * (D * e2 * s.sz + 2.0 * g * e2 * rwt +
                                       0.25 * (D * g2 * shift + g2 * g * (two_photon + Operator(two_photon.adjoint()))));
        add_pair(e.kick[0], 1, (1.0 / (2.0 * kI * W)) * (2.0 * p.epsilon * s.sp));
        add_pair(e.kick[0], 2, (1.0 / (2.0 * kI * W)) * (g * ad_sp));
        add_pair(e.kick[1], 1, (1.0 / (4.0 * kI * W2)) * (p.epsilon * (7.0 * g * ad * s.sz - 4.0 * D * s.sp)));
        add_pair(e.kick[1], 2, (1.0 / (4.0 * kI * W2)) * (g * (g * ad2_sz - D * ad_sp)));
    }
    for (auto& H : e.h_orders) {
        if (H.rows() == 0) H = Operator::Zero(dim, dim);
    }
    return e;
}

Operator kick_operator_at(const EffectiveExpansion& exp, double t, int max_order) {
    check_order(max_order, 0, 2, "kick_operator_at");
    const Eigen::Index dim = exp.h_orders[0].rows();
    Operator K = Operator::Zero(dim, dim);
    for (int o = 1; o <= max_order; ++o) {
        for (const auto& [l, G] : exp.kick[o - 1]) K += std::polar(1.0, l * exp.Omega * t) * G;
    }
    return K;
}

double harmonic_map_distance(const HarmonicMap& A, const HarmonicMap& B) {
    double worst = 0.0;
    for (const auto& [l, G] : A) {
        auto it = B.find(l);
        worst = std::max(worst, it == B.end() ? max_abs(G) : max_abs(G - it->second));
    }
    for (const auto& [l, G] : B) {
        if (!A.count(l)) worst = std::max(worst, max_abs(G));
    }
    return worst;
}

}  // namespace rabi_floquet

#include "rabi_floquet/spectrum.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace rabi_floquet;

namespace {

double nearest_distance(const NumericSpectrum& s, double value) {
    double best = 1e300;
    for (const auto& l : s.levels) best = std::min(best, std::abs(folded_difference(l.value_folded, value, s.Omega)));
    return best;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("Rabi and bias frequencies") {
    CHECK(rabi_frequencies(ModelParams::airm(0.0, 0.1, 0.0), 0).rabi == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(rabi_frequencies(ModelParams::airm(0.1, 0.1, 0.0), 0).rabi == doctest::Approx(0.223607).epsilon(1e-6));
    const auto r = rabi_frequencies(ModelParams::asrm(0.1, 0.1, 0.1), 0);
    REQUIRE(r.bias.has_value());
    CHECK(*r.bias == doctest::Approx(0.173205).epsilon(1e-6));
    CHECK_FALSE(rabi_frequencies(ModelParams::airm(0.1, 0.1, 0.1), 0).bias.has_value());
}

TEST_CASE("folding into the first zone") {
    CHECK(fold_to_first_bz(0.0, 2.0) == 0.0);
    CHECK(fold_to_first_bz(1.5, 2.0) == doctest::Approx(-0.5));
    CHECK(fold_to_first_bz(1.0, 2.0) == -1.0);
    CHECK(fold_to_first_bz(-1.0, 2.0) == -1.0);
    CHECK_THROWS_AS(fold_to_first_bz(0.3, 0.0), std::invalid_argument);
    for (double E : {-7.3, -0.49, 0.2, 3.14159, 12.5}) {
        const double f = fold_to_first_bz(E, 1.0);
        CHECK(f >= -0.5);
        CHECK(f < 0.5);
        CHECK(fold_to_first_bz(f, 1.0) == f);
        for (int k : {-3, 1, 4}) CHECK(std::abs(fold_to_first_bz(E + k, 1.0) - f) < 1e-12);
    }
    CHECK(folded_difference(0.45, -0.45, 1.0) == doctest::Approx(-0.1));
}

TEST_CASE("level keys and parity") {
    CHECK(LevelKey::ground().label() == "E0");
    CHECK(LevelKey{3, Branch::plus}.label() == "E3+");
    CHECK(LevelKey::ground().parity() == Parity::even);
    CHECK(LevelKey{0, Branch::minus}.parity() == Parity::odd);
    CHECK(LevelKey{1, Branch::plus}.excitation() == 2);
}

TEST_CASE("JC limit of the series") {
    const auto p = ModelParams::airm(0.1, 0.3, 0.0);
    for (int order = 0; order <= 2; ++order) {
        for (int n = 0; n < 4; ++n) {
            const double OR = rabi_frequencies(p, n).rabi;
            CHECK(analytic_quasi_energy(p, {n, Branch::plus}, order).value_unfolded == doctest::Approx(0.5 * OR));
            CHECK(analytic_quasi_energy(p, {n, Branch::minus}, order).value_unfolded == doctest::Approx(-0.5 * OR));
        }
        CHECK(analytic_quasi_energy(p, LevelKey::ground(), order).value_unfolded == -0.05);
    }
}

TEST_CASE("series equals the effective 2x2 block to third order") {
    // Each order-2 error should drop ~8x per doubling of the drive frequency.
    const ModelParams cases[] = {ModelParams::airm(0.1, 0.3, 0.1), ModelParams::asrm(0.1, 0.3, 0.2),
                                 ModelParams::asrm(-0.2, 0.15, 0.25)};
    for (const auto& p : cases) {
        for (int n = 0; n <= 2; ++n) {
            std::vector<double> Ws, errs;
            for (double W = 4.0; W <= 32.0; W *= 2.0) {
                const Eigen::Vector2d exact = testing::effective_block_eigenvalues(p, n, W);
                const double plus = analytic_quasi_energy(p, {n, Branch::plus}, 2, W).value_unfolded;
                const double minus = analytic_quasi_energy(p, {n, Branch::minus}, 2, W).value_unfolded;
                Ws.push_back(W);
                errs.push_back(std::max(std::abs(plus - exact(1)), std::abs(minus - exact(0))));
            }
            CHECK(testing::log_slope(Ws, errs) == doctest::Approx(-3.0).epsilon(0.1));
        }
    }
}

TEST_CASE("ground level equals the isolated diagonal entry") {
    for (const auto& p : {ModelParams::airm(0.1, 0.3, 0.1), ModelParams::asrm(0.1, 0.3, 0.2)}) {
        const Operator H = closed_form_expansion(p, Truncation(3)).effective_hamiltonian(2);
        CHECK(analytic_quasi_energy(p, LevelKey::ground(), 2).value_unfolded == doctest::Approx(H(0, 0).real()).epsilon(1e-14));
    }
}

TEST_CASE("analytic eigenvectors") {
    const Truncation t(4);
    SUBCASE("resonant equal superposition") {
        const auto m = analytic_eigenvector(ModelParams::airm(0.0, 0.2, 0.0), {1, Branch::plus}, 0, t);
        CHECK(m.coefficient == doctest::Approx(1.0));
        CHECK(std::abs(m.state(basis_index(1, Spin::up))) == doctest::Approx(std::sqrt(0.5)));
    }
    SUBCASE("orthogonal branches at order 0") {
        const auto p = ModelParams::asrm(0.17, 0.23, 0.3);
        for (int n = 0; n < 3; ++n) {
            const State a = analytic_eigenvector(p, {n, Branch::plus}, 0, t).state;
            const State b = analytic_eigenvector(p, {n, Branch::minus}, 0, t).state;
            CHECK(std::abs(a.dot(b)) < 1e-12);
            CHECK(a.norm() == doctest::Approx(1.0));
        }
    }
    SUBCASE("order 2 fidelity against the effective block") {
        const auto p = ModelParams::airm(0.1, 0.2, 0.1);
        const Operator H = closed_form_expansion(p, Truncation(3)).effective_hamiltonian(2);
        const Eigen::Index i = basis_index(0, Spin::up), j = basis_index(1, Spin::down);
        Eigen::Matrix2cd block;
        block << H(i, i), H(i, j), H(j, i), H(j, j);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
        for (int b = 0; b < 2; ++b) {
            const State v = analytic_eigenvector(p, {0, b == 1 ? Branch::plus : Branch::minus}, 2, t).state;
            const Eigen::Vector2cd ex = es.eigenvectors().col(b);
            const double fid = std::norm(std::conj(ex(0)) * v(i) + std::conj(ex(1)) * v(j));
            CHECK(fid >= 1.0 - 1e-4);
        }
    }
    SUBCASE("zero coupling picks basis states by the sign of the detuning") {
        const auto m = analytic_eigenvector(ModelParams::airm(0.1, 0.0, 0.1), {2, Branch::plus}, 2, t);
        CHECK(m.degenerate_limit);
        CHECK(std::abs(m.state(basis_index(2, Spin::up))) == 1.0);
        const auto q = analytic_eigenvector(ModelParams::airm(-0.1, 0.0, 0.1), {2, Branch::plus}, 2, t);
        CHECK(std::abs(q.state(basis_index(3, Spin::down))) == 1.0);
    }
    CHECK_THROWS_AS(analytic_eigenvector(ModelParams::airm(0.1, 0.1, 0.1), {4, Branch::plus}, 2, t), std::out_of_range);
}

TEST_CASE("extended Floquet matrix layout") {
    const Truncation t(2, 3);
    SUBCASE("undriven blocks are shifted copies") {
        const auto fc = rotating_components(ModelParams::airm(0.1, 0.3, 0.0), Truncation(2, 1));
        const ExtendedFloquetMatrix F = extended_floquet_matrix(fc, Truncation(2, 1));
        CHECK(F.dim() == 18);
        for (int m = -1; m <= 1; ++m) {
            const Operator expected = fc.h0() + m * 2.0 * Operator::Identity(6, 6);
            CHECK(max_abs(F.block(m, m) - expected) == 0.0);
        }
        CHECK(max_abs(F.block(1, 0)) == 0.0);
    }
    SUBCASE("AiRM is block tridiagonal") {
        const auto fc = rotating_components(ModelParams::airm(0.1, 0.3, 0.1), t);
        const ExtendedFloquetMatrix F = extended_floquet_matrix(fc, t);
        CHECK(is_hermitian(F.matrix));
        CHECK(max_abs(F.block(2, 0)) == 0.0);
        CHECK(max_abs(F.block(1, 0) - fc.components.at(1)) == 0.0);
    }
    SUBCASE("AsRM carries g a^dag sigma_+ two blocks off the diagonal") {
        const auto fc = rotating_components(ModelParams::asrm(0.1, 0.3, 0.2), t);
        const ExtendedFloquetMatrix F = extended_floquet_matrix(fc, t);
        const auto [a, ad] = build_ladder_ops(t);
        const SpinOps s = build_spin_ops(t);
        CHECK(max_abs(F.block(1, -1) - 0.3 * ad * s.sp) == 0.0);
        CHECK(max_abs(F.block(3, 0)) == 0.0);
        CHECK_THROWS_AS(extended_floquet_matrix(fc, Truncation(2, 1)), std::invalid_argument);
    }
}

TEST_CASE("numeric route in the undriven limit") {
    const Truncation t(4, 10);
    const auto p = ModelParams::airm(0.1, 0.3, 0.0);
    NumericSpectrum s = numeric_quasi_energies(rotating_components(p, t), t);
    CHECK(s.levels.size() == static_cast<std::size_t>(t.dim()));
    CHECK(nearest_distance(s, -0.05) < 1e-10);
    for (int n = 0; n + 1 <= t.n_cutoff; ++n) {
        const double OR = rabi_frequencies(p, n).rabi;
        CHECK(nearest_distance(s, fold_to_first_bz(0.5 * OR, 2.0)) < 1e-10);
        CHECK(nearest_distance(s, fold_to_first_bz(-0.5 * OR, 2.0)) < 1e-10);
    }
    label_numeric_levels(s, p, t);
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        CHECK(s.zero_block_weight[i] == doctest::Approx(1.0));
        CHECK(std::abs(s.parity_expectation[i]) == doctest::Approx(1.0));
        if (s.levels[i].n) {
            const double sign = s.levels[i].parity == Parity::even ? 1.0 : -1.0;
            CHECK(s.parity_expectation[i] == doctest::Approx(sign));
        }
    }
}

TEST_CASE("numeric partners near a moderate coupling") {
    const Truncation t(4, 10);
    const auto p = ModelParams::airm(0.1, 0.3, 0.1);
    NumericSpectrum s = numeric_quasi_energies(rotating_components(p, t), t);
    for (const auto& level : analytic_levels(p, t.n_cutoff - 2)) CHECK(nearest_distance(s, level.value_folded) < 5e-3);
    label_numeric_levels(s, p, t);
    int labelled = 0;
    for (const auto& l : s.levels) labelled += l.n.has_value();
    CHECK(labelled >= 7);
}

TEST_CASE("harmonic cutoff convergence") {
    const auto p = ModelParams::asrm(0.1, 0.2, 0.2);
    const Truncation a(4, 10), b(4, 14);
    const NumericSpectrum sa = numeric_quasi_energies(rotating_components(p, a), a);
    const NumericSpectrum sb = numeric_quasi_energies(rotating_components(p, b), b);
    REQUIRE(sa.levels.size() == sb.levels.size());
    for (std::size_t i = 0; i < sa.levels.size(); ++i) {
        CHECK(std::abs(folded_difference(sa.levels[i].value_folded, sb.levels[i].value_folded, 1.0)) < 1e-8);
    }
}

TEST_CASE("detuning gap") {
    CHECK(detuning_gap(ModelParams::airm(0.1, 0.3, 0.2), GapMode::analytic_formula) == 0.1);
    CHECK(detuning_gap(ModelParams::asrm(0.1, 0.3, 0.0), GapMode::analytic_formula) == 0.1);
    CHECK(detuning_gap(ModelParams::asrm(0.1, 0.3, 0.2), GapMode::analytic_formula) == doctest::Approx(0.172));
    const double numeric = detuning_gap(ModelParams::asrm(0.1, 0.3, 0.2), GapMode::numeric_limit);
    CHECK(std::abs(numeric - 0.172) / 0.172 < 0.1);
    CHECK(detuning_gap(ModelParams::airm(0.1, 0.3, 0.0), GapMode::numeric_limit) == doctest::Approx(0.1).epsilon(1e-4));
    // A finite g' shifts E_{0-} by -2g'^2/Omega while E_{0+} stays put.
    const double shifted = detuning_gap(ModelParams::airm(0.1, 0.3, 0.2), GapMode::numeric_limit);
    CHECK(shifted == doctest::Approx(0.1 + 2.0 * 0.2 * 0.2 / 2.0).epsilon(0.05));
}

}

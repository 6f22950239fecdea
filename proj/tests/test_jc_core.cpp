#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "jch/jc_core.hpp"

using namespace jch;

namespace {

// Independent oracle: diagonalize the n-excitation restriction of the JC
// Hamiltonian, [[n w, b sqrt(n)], [b sqrt(n), (n-1) w + e]], directly.
Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> jc_sector_solver(int n, const SiteParams& p) {
    Eigen::Matrix2d h;
    const double off = p.beta * std::sqrt(double(n));
    h << n * p.omega, off, off, (n - 1) * p.omega + p.epsilon;
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h);
}

}  // namespace

TEST_CASE("generalized Rabi frequency") {
    CHECK(rabi_chi(1, SiteParams::from_detuning(0, 0, 1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rabi_chi(2, SiteParams::from_detuning(0, 1, 1)) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(rabi_chi(0, SiteParams::from_detuning(0, 2, 1)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(rabi_chi(-1, SiteParams{}), std::invalid_argument);
    CHECK_THROWS_AS(rabi_chi(1, SiteParams::from_detuning(0, 0, -1)), std::invalid_argument);
}

TEST_CASE("dressed state at resonance") {
    const auto p = SiteParams::from_detuning(5.0, 0.0, 1.0);
    const auto s = dressed_state(1, Branch::lower, p);
    CHECK(s.c_g == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.c_e == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.energy == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("n = 0 convention") {
    const auto p = SiteParams::from_detuning(3.0, -0.7, 2.0);
    for (auto br : {Branch::lower, Branch::upper}) {
        const auto s = dressed_state(0, br, p);
        CHECK(s.c_g == 1.0);
        CHECK(s.c_e == 0.0);
        CHECK(s.energy == 0.0);
        CHECK(s.branch == Branch::lower);
    }
    CHECK(dressed_ground_energy(0, p) == 0.0);
}

TEST_CASE("large-detuning limit") {
    const auto p = SiteParams::from_detuning(0.0, 100.0, 1.0);
    const auto s = dressed_state(1, Branch::lower, p);
    CHECK(std::abs(s.c_e) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(s.c_g == doctest::Approx(1.0 / 100.0).epsilon(2e-2));
    // cross-check against direct 2x2 diagonalization
    const auto es = jc_sector_solver(1, p);
    CHECK(s.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("normalization, eigen-residual, branch ordering") {
    std::mt19937 rng(7131);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = SiteParams::from_detuning(u(rng), 4.0 * u(rng), 0.1 + std::abs(u(rng)));
        const int n = 1 + trial % 8;
        const auto lo = dressed_state(n, Branch::lower, p);
        const auto up = dressed_state(n, Branch::upper, p);

        CHECK(lo.c_g * lo.c_g + lo.c_e * lo.c_e == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(up.c_g * up.c_g + up.c_e * up.c_e == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lo.energy <= up.energy);

        Eigen::Matrix2d h;
        const double off = p.beta * std::sqrt(double(n));
        h << n * p.omega, off, off, (n - 1) * p.omega + p.epsilon;
        for (const auto& s : {lo, up}) {
            Eigen::Vector2d v(s.c_g, s.c_e);
            CHECK((h * v - s.energy * v).norm() <= 1e-12 * h.norm());
        }
        // dressed energies are the true sector eigenvalues
        const auto es = jc_sector_solver(n, p);
        CHECK(lo.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
        CHECK(up.energy == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-12));
    }
}

TEST_CASE("atomic-limit filling") {
    const double beta = 1.0, omega = 0.0;
    auto site = SiteParams::from_detuning(omega, 0.0, beta);

    // per-n scan of E_{|-,n⟩} - mu n crossings at resonance
    CHECK(atomic_limit_filling(site, omega - 0.5 * beta) == 1);
    CHECK(atomic_limit_filling(site, omega - 1.5 * beta) == 0);
    CHECK(atomic_limit_filling(site, omega + (1.0 - std::sqrt(2.0) + 0.01) * beta) == 2);

    // exactly on the 1|2 boundary ties break toward smaller n
    CHECK(atomic_limit_filling(site, omega + (1.0 - std::sqrt(2.0)) * beta) <= 2);

    CHECK_THROWS_AS(atomic_limit_filling(site, omega + 10.0 * beta, 20), std::runtime_error);
}

TEST_CASE("gauge shift leaves filling unchanged") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.5, -0.2);
    for (int trial = 0; trial < 50; ++trial) {
        const double delta = (trial % 3 - 1) * 0.8;
        const double mu_rel = u(rng);
        const double c = 10.0 * u(rng);
        const auto base = SiteParams::from_detuning(0.0, delta, 1.0);
        const auto shifted = SiteParams{base.omega + c, base.epsilon + c, base.beta};
        CHECK(atomic_limit_filling(base, mu_rel) ==
              atomic_limit_filling(shifted, mu_rel + c));
        // E_{|-,n⟩} - mu n shifts uniformly: differences cancel
        for (int n = 1; n <= 4; ++n) {
            const double a = dressed_ground_energy(n, base) - mu_rel * n;
            const double b = dressed_ground_energy(n, shifted) - (mu_rel + c) * n;
            const double a1 = dressed_ground_energy(n + 1, base) - mu_rel * (n + 1);
            const double b1 = dressed_ground_energy(n + 1, shifted) - (mu_rel + c) * (n + 1);
            CHECK(a1 - a == doctest::Approx(b1 - b).epsilon(1e-10));
        }
    }
}

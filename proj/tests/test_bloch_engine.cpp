#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "jch/bloch_engine.hpp"

using namespace jch;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

UnitCellSpec random_cell(std::mt19937& rng, int m, int max_fill) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> fill(0, max_fill);
    UnitCellSpec cell;
    for (int r = 0; r < m; ++r) {
        cell.sites.push_back(SiteParams::from_detuning(0.0, u(rng), 1.0));
        cell.fillings.push_back(fill(rng));
    }
    cell.kappa = 0.05 * (1.0 + u(rng));
    cell.mu = 0.5 * u(rng);
    return cell;
}

}  // namespace

TEST_CASE("hop vectors") {
    const auto res = SiteParams::from_detuning(0.0, 0.0, 1.0);
    const auto w0 = hop_vector(res, 0, Sector::particle);
    CHECK(w0(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w0(1) == doctest::Approx(0.0).epsilon(1e-15));

    const auto w1 = hop_vector(res, 1, Sector::particle);
    CHECK(w1(0) == doctest::Approx(1.0).epsilon(1e-14));                   // c_g(1) sqrt(2)
    CHECK(w1(1) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14)); // c_e(1) sqrt(1)
    CHECK(w1.squaredNorm() == doctest::Approx(1.5).epsilon(1e-14));        // (n+1)c_g^2 + n c_e^2

    const auto u1 = hop_vector(res, 1, Sector::hole);
    CHECK(u1(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(u1(1) == 0.0);

    CHECK_THROWS_AS(hop_vector(res, 0, Sector::hole), std::invalid_argument);
}

TEST_CASE("hole sector dimensions") {
    CHECK(sector_site_dim(0, Sector::particle) == 2);
    CHECK(sector_site_dim(3, Sector::particle) == 2);
    CHECK(sector_site_dim(0, Sector::hole) == 0);
    CHECK(sector_site_dim(1, Sector::hole) == 1);
    CHECK(sector_site_dim(2, Sector::hole) == 2);
}

TEST_CASE("n = 0 particle block assembled by hand") {
    // beta = 1, delta = 0, kappa = 0.01, omega - mu = 0.5, k = 0
    auto cell = UnitCellSpec::uniform(SiteParams::from_detuning(0.0, 0.0, 1.0), 0, 0.01, -0.5);
    const auto block = build_block(cell, Sector::particle, 0, 0.0);
    REQUIRE(block.matrix.rows() == 2);
    CHECK(block.matrix(0, 0).real() == doctest::Approx(0.48).epsilon(1e-14));
    CHECK(block.matrix(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(block.matrix(0, 1).real() == doctest::Approx(1.0).epsilon(1e-14));

    const auto ev = diagonalize(block);
    // closed-form 2x2 eigenvalues: 0.49 -/+ sqrt(1.0001)
    const double root = std::sqrt(1.0001);
    CHECK(ev(0) == doctest::Approx(0.49 - root).epsilon(1e-13));
    CHECK(ev(1) == doctest::Approx(0.49 + root).epsilon(1e-13));
    CHECK(ev(0) == doctest::Approx(-0.5100499987500625).epsilon(1e-12));
}

TEST_CASE("n = 1 hole block is the 1x1 cosine band") {
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    for (double k : {0.0, 0.3, pi / 2, 2.0, pi}) {
        auto cell = UnitCellSpec::uniform(site, 1, 0.02, -0.5);
        const auto block = build_block(cell, Sector::hole, 0, k);
        REQUIRE(block.matrix.rows() == 1);
        const double expected = cell.mu - site.omega + site.beta - cell.kappa * std::cos(k);
        CHECK(block.matrix(0, 0).real() == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("diagonalize basics") {
    BlochBlock b;
    b.matrix = Eigen::MatrixXcd(2, 2);
    b.matrix << 0, 1, 1, 0;
    const auto ev = diagonalize(b);
    CHECK(ev(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev(1) == doctest::Approx(1.0).epsilon(1e-14));

    BlochBlock one;
    one.matrix = Eigen::MatrixXcd(1, 1);
    one.matrix << 3.25;
    CHECK(diagonalize(one)(0) == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("closed-form equivalence with the assembled block") {
    // particle n >= 1 and hole n >= 2 match branch by branch; the single n = 1
    // hole eigenvalue is always a member of the closed-form pair.
    for (int n = 1; n <= 6; ++n)
        for (double dr : {-1.0, 0.0, 1.0})
            for (double kappa : {0.001, 0.01, 0.1}) {
                const auto site = SiteParams::from_detuning(0.0, dr, 1.0);
                auto cell = UnitCellSpec::uniform(site, n, kappa, -0.3);
                for (int i = 0; i < 21; ++i) {
                    const double k = -pi + 2 * pi * i / 20.0;
                    const auto pev = diagonalize(build_block(cell, Sector::particle, 0, k));
                    const auto [pm, pp] = closed_form_particle(n, k, site, kappa, cell.mu);
                    CHECK(std::abs(pev(0) - pm) <= 1e-10);
                    CHECK(std::abs(pev(1) - pp) <= 1e-10);

                    const auto hev = diagonalize(build_block(cell, Sector::hole, 0, k));
                    const auto [hm, hp] = closed_form_hole(n, k, site, kappa, cell.mu);
                    if (n >= 2) {
                        CHECK(std::abs(hev(0) - hm) <= 1e-10);
                        CHECK(std::abs(hev(1) - hp) <= 1e-10);
                    } else {
                        CHECK(std::min(std::abs(hev(0) - hm), std::abs(hev(0) - hp)) <= 1e-10);
                    }
                }
            }
}

TEST_CASE("closed-form point values") {
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);

    // reference working point, n = 0 particle at k = 0
    const auto [e0m, e0p] = closed_form_particle(0, 0.0, site, 0.01, -0.5);
    CHECK(e0m == doctest::Approx(0.49 - std::sqrt(1.0001)).epsilon(1e-14));
    CHECK(e0p == doctest::Approx(0.49 + std::sqrt(1.0001)).epsilon(1e-14));

    // kappa = 0 limits collapse to dressed-state energy differences
    for (int n = 0; n <= 4; ++n) {
        const auto [em, ep] = closed_form_particle(n, 0.7, site, 0.0, -0.5);
        CHECK(em == doctest::Approx(0.5 + std::sqrt(double(n)) - std::sqrt(double(n + 1)))
                        .epsilon(1e-13));
        CHECK(ep == doctest::Approx(0.5 + std::sqrt(double(n)) + std::sqrt(double(n + 1)))
                        .epsilon(1e-13));
    }
    const auto [hm0, hp0] = closed_form_hole(2, 0.7, site, 0.0, -0.5);
    CHECK(hm0 == doctest::Approx(-0.5 + std::sqrt(2.0) - 1.0).epsilon(1e-13));
    CHECK(hp0 == doctest::Approx(-0.5 + std::sqrt(2.0) + 1.0).epsilon(1e-13));

    // n = 1, delta = 0, k = pi/2: h = 0, E = w - mu + beta -/+ sqrt(2) beta
    const auto [qm, qp] = closed_form_particle(1, pi / 2, site, 0.05, -0.5);
    CHECK(qm == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(qp == doctest::Approx(1.5 + std::sqrt(2.0)).epsilon(1e-12));

    // n = 1 hole, k = 0: lower root mu - w + beta - kappa
    const auto [h1m, h1p] = closed_form_hole(1, 0.0, site, 0.01, -0.5);
    CHECK(h1m == doctest::Approx(0.49).epsilon(1e-13));
    CHECK(h1p == doctest::Approx(0.5).epsilon(1e-13));

    // n = 1 hole with cos k < 0: pair {mu-w+beta, mu-w+beta-kappa cos k}; the
    // k-dependent member equals the direct 1x1 block, the flat one is spurious
    const double k_neg = 3.0;
    const auto [nm, np] = closed_form_hole(1, k_neg, site, 0.01, -0.5);
    const double direct = 0.5 - 0.01 * std::cos(k_neg);
    CHECK(nm == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(np == doctest::Approx(direct).epsilon(1e-13));

    CHECK_THROWS_AS(closed_form_hole(0, 0.0, site, 0.01, 0.0), std::invalid_argument);
}

TEST_CASE("trace identity for the k-dependent part") {
    std::mt19937 rng(411);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const auto site = SiteParams::from_detuning(0.2 * u(rng), u(rng), 1.0);
        const int n = 1 + trial % 5;
        const double kappa = 0.02 * (1.5 + u(rng));
        const double k = pi * u(rng);
        auto cell = UnitCellSpec::uniform(site, n, kappa, 0.1 * u(rng));

        // cos(pi/2) = 0 removes the k-dependent part
        const auto at_k = build_block(cell, Sector::particle, 0, k).matrix;
        const auto flat = build_block(cell, Sector::particle, 0, pi / 2).matrix;
        const auto bg = dressed_state(n, Branch::lower, site);
        const double h = (n + bg.c_g * bg.c_g) * kappa * std::cos(k);
        CHECK((at_k - flat).trace().real() == doctest::Approx(-2.0 * h).epsilon(1e-12));

        const auto at_kh = build_block(cell, Sector::hole, 0, k).matrix;
        const auto flath = build_block(cell, Sector::hole, 0, pi / 2).matrix;
        const double hp = (n - bg.c_e * bg.c_e) * kappa * std::cos(k);
        CHECK((at_kh - flath).trace().real() == doctest::Approx(-2.0 * hp).epsilon(1e-12));
    }
}

TEST_CASE("hopping blocks are rank one") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        auto cell = random_cell(rng, 2, 3);
        cell.fillings = {2, 3};  // full 2x2 blocks in both sectors
        for (auto sector : {Sector::particle, Sector::hole}) {
            const auto block = build_block(cell, sector, 0, 0.9);
            const Eigen::MatrixXcd inter = block.matrix.block(0, 2, 2, 2);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(inter);
            CHECK(svd.singularValues()(1) <= 1e-13 * cell.kappa);
        }
    }
}

TEST_CASE("band folding: two identical sites reproduce the m = 1 spectrum") {
    const auto site = SiteParams::from_detuning(0.0, 0.4, 1.0);
    UnitCellSpec two{{site, site}, {1, 1}, 0.03, -0.45};
    auto one = UnitCellSpec::uniform(site, 1, 0.03, -0.45);
    for (auto sector : {Sector::particle, Sector::hole})
        for (double K : {0.0, 0.7, -1.9, pi}) {
            const auto folded = diagonalize(build_block(two, sector, 0, K));
            const auto a = diagonalize(build_block(one, sector, 0, K / 2));
            const auto b = diagonalize(build_block(one, sector, 0, K / 2 + pi));
            std::vector<double> expect(a.data(), a.data() + a.size());
            expect.insert(expect.end(), b.data(), b.data() + b.size());
            expect = sorted(expect);
            REQUIRE(int(expect.size()) == folded.size());
            for (int i = 0; i < folded.size(); ++i)
                CHECK(folded(i) == doctest::Approx(expect[i]).epsilon(1e-12));
        }
}

TEST_CASE("bands are even, periodic, and sorted") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
        auto cell = random_cell(rng, 1 + trial % 3, 2);
        bool any_hole = false;
        for (int f : cell.fillings) any_hole |= f > 0;
        for (auto sector : {Sector::particle, Sector::hole}) {
            if (sector == Sector::hole && !any_hole) continue;
            const auto band = sample_band(cell, sector, 41);
            const int nk = int(band.k_grid.size());
            for (int i = 0; i < nk; ++i) {
                for (int j = 0; j + 1 < band.energies.cols(); ++j)
                    CHECK(band.energies(i, j) <= band.energies(i, j + 1) + 1e-14);
                // evenness: the grid is symmetric, k_i = -k_{nk-1-i}
                CHECK(band.energies(i, 0) ==
                      doctest::Approx(band.energies(nk - 1 - i, 0)).epsilon(1e-12));
            }
            // periodicity in the cell momentum
            const auto lo = diagonalize(build_block(cell, sector, 0, 0.37));
            const auto hi = diagonalize(build_block(cell, sector, 0, 0.37 + 2 * pi));
            for (int j = 0; j < lo.size(); ++j)
                CHECK(lo(j) == doctest::Approx(hi(j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("doped cell carries four particle branches") {
    UnitCellSpec doped{{SiteParams::from_detuning(0.0, 0.0, 1.0),
                        SiteParams::from_detuning(0.0, 1.0, 1.0)},
                       {1, 1},
                       0.02,
                       -0.6};
    const auto band = sample_band(doped, Sector::particle, 21);
    CHECK(band.energies.cols() == 4);
    const auto block = build_block(doped, Sector::particle, 0, 0.4);
    REQUIRE(block.basis_labels.size() == 4);
    CHECK(block.basis_labels[0].site == 0);
    CHECK(block.basis_labels[0].bare == 'g');
    CHECK(block.basis_labels[3].site == 1);
    CHECK(block.basis_labels[3].bare == 'e');
}

TEST_CASE("gauge shift invariance of bands") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto cell = random_cell(rng, 2, 2);
        cell.fillings = {1, 2};
        const double c = 3.0 * u(rng);
        auto shifted = cell;
        for (auto& s : shifted.sites) {
            s.omega += c;
            s.epsilon += c;
        }
        shifted.mu += c;
        for (auto sector : {Sector::particle, Sector::hole}) {
            const auto a = diagonalize(build_block(cell, sector, 0, 0.81));
            const auto b = diagonalize(build_block(shifted, sector, 0, 0.81));
            for (int j = 0; j < a.size(); ++j)
                CHECK(a(j) == doctest::Approx(b(j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("uniform resonant particle band is minimized at k = 0") {
    for (int n : {0, 1, 2}) {
        auto cell = UnitCellSpec::uniform(SiteParams::from_detuning(0.0, 0.0, 1.0), n,
                                          0.02, -0.5);
        const auto band = sample_band(cell, Sector::particle, 65);
        int argmin = 0;
        for (int i = 1; i < int(band.k_grid.size()); ++i)
            if (band.energies(i, 0) < band.energies(argmin, 0)) argmin = i;
        CHECK(band.k_grid[argmin] == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("kappa -> 0 continuity toward dressed-state differences") {
    const auto site = SiteParams::from_detuning(0.0, 0.5, 1.0);
    for (int n : {0, 1, 3}) {
        auto cell = UnitCellSpec::uniform(site, n, 1e-8, -0.4);
        const auto ev = diagonalize(build_block(cell, Sector::particle, 0, 0.3));
        const double e_lo = dressed_ground_energy(n + 1, site) -
                            dressed_ground_energy(n, site) - cell.mu;
        CHECK(std::abs(ev(0) - e_lo) <= 1e-6);
    }
}

TEST_CASE("error paths") {
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    UnitCellSpec empty_holes{{site, site}, {0, 0}, 0.01, 0.0};
    CHECK_THROWS_AS(build_block(empty_holes, Sector::hole, 0, 0.0), std::invalid_argument);

    UnitCellSpec bad{{site}, {1, 2}, 0.01, 0.0};
    CHECK_THROWS_AS(build_block(bad, Sector::particle, 0, 0.0), std::invalid_argument);

    auto cell = UnitCellSpec::uniform(site, 1, 0.01, 0.0);
    CHECK_THROWS_AS(build_block(cell, Sector::particle, 5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_band(cell, Sector::particle, 1), std::invalid_argument);
}

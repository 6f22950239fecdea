#include "jch/exact_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include "jch/parallel.hpp"
#include <sstream>
#include <stdexcept>

namespace jch {

namespace {

constexpr int bits_per_site = 6;
constexpr std::uint64_t site_mask = (1u << bits_per_site) - 1;

int field_shift(int cavities, int site) {
    return bits_per_site * (cavities - 1 - site);
}

std::uint64_t with_site(std::uint64_t key, int cavities, int site, int photons, int atom) {
    const int shift = field_shift(cavities, site);
    key &= ~(site_mask << shift);
    key |= std::uint64_t(photons * 2 + atom) << shift;
    return key;
}

void enumerate_states(int cavities, int site, int remaining, int n_max,
                      std::uint64_t key, std::vector<std::uint64_t>& out) {
    if (site == cavities) {
        if (remaining == 0) out.push_back(key);
        return;
    }
    const int tail_capacity = (cavities - site - 1) * (n_max + 1);
    for (int p = 0; p <= std::min(remaining, n_max); ++p)
        for (int a = 0; a <= std::min(1, remaining - p); ++a) {
            if (remaining - p - a > tail_capacity) continue;
            enumerate_states(cavities, site + 1, remaining - p - a, n_max,
                             with_site(key, cavities, site, p, a), out);
        }
}

double matrix_inf_norm(const Eigen::SparseMatrix<double>& h) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(h.rows());
    for (int c = 0; c < h.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(h, c); it; ++it)
            row_sums(it.row()) += std::abs(it.value());
    return row_sums.maxCoeff();
}

}  // namespace

double lanczos_lowest_eigenvalue(const Eigen::SparseMatrix<double>& h, double tol_abs) {
    const int n = int(h.rows());
    const int max_iter = std::min(n, 400);

    std::mt19937_64 rng(0x1f2e3d4c5b6a7989ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd start(n);
    for (int i = 0; i < n; ++i) start(i) = gauss(rng);
    start.normalize();

    for (int sweep = 0; sweep < 3; ++sweep) {
        std::vector<Eigen::VectorXd> basis{start};
        std::vector<double> alpha, beta;
        Eigen::VectorXd ritz;
        double theta = 0.0;

        for (int j = 0; j < max_iter; ++j) {
            Eigen::VectorXd w = h * basis[j];
            alpha.push_back(basis[j].dot(w));
            w -= alpha[j] * basis[j];
            if (j > 0) w -= beta[j - 1] * basis[j - 1];
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& v : basis) w -= v.dot(w) * v;
            const double b = w.norm();

            const bool last = j + 1 == max_iter;
            const bool breakdown = b <= 1e-14 * std::max(1.0, tol_abs * 1e10);
            if (breakdown || last || (j + 1) % 25 == 0) {
                const int m = j + 1;
                Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
                for (int i = 0; i < m; ++i) {
                    tri(i, i) = alpha[i];
                    if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
                theta = es.eigenvalues()(0);
                const Eigen::VectorXd s = es.eigenvectors().col(0);
                if (breakdown || last || b * std::abs(s(m - 1)) <= 0.1 * tol_abs) {
                    ritz = Eigen::VectorXd::Zero(n);
                    for (int i = 0; i < m; ++i) ritz += s(i) * basis[i];
                    ritz.normalize();
                    if ((h * ritz - theta * ritz).norm() <= tol_abs) return theta;
                    if (breakdown) break;
                }
            }
            if (breakdown) break;
            beta.push_back(b);
            basis.push_back(w / b);
        }
        if (ritz.size() == n) start = ritz;  // warm restart from the best Ritz vector
    }
    std::ostringstream msg;
    msg << "lanczos_lowest_eigenvalue: no convergence to residual " << tol_abs
        << " at dimension " << n;
    throw std::runtime_error(msg.str());
}

int SectorBasis::index_of(std::uint64_t key) const {
    const auto it = std::lower_bound(states.begin(), states.end(), key);
    if (it == states.end() || *it != key) return -1;
    return int(it - states.begin());
}

std::uint64_t SectorBasis::pack(const std::vector<int>& photons,
                                const std::vector<int>& atoms) {
    std::uint64_t key = 0;
    const int m = int(photons.size());
    for (int r = 0; r < m; ++r) key = with_site(key, m, r, photons[r], atoms[r]);
    return key;
}

int SectorBasis::photons(std::uint64_t key, int site) const {
    return int((key >> field_shift(cavities, site)) & site_mask) / 2;
}

int SectorBasis::atom(std::uint64_t key, int site) const {
    return int((key >> field_shift(cavities, site)) & site_mask) % 2;
}

SectorMatrix build_sector(int cavities, int excitations, const SiteParams& site,
                          double kappa, Boundary bc, int n_max, std::size_t nnz_cap) {
    if (cavities < 2) throw std::invalid_argument("build_sector: need >= 2 cavities");
    if (excitations < 0) throw std::invalid_argument("build_sector: excitations must be >= 0");
    site.validate();
    if (n_max < 0) n_max = excitations;
    if (n_max > 31)
        throw std::invalid_argument("build_sector: n_max > 31 exceeds the state packing");
    if (bits_per_site * cavities > 60)
        throw std::invalid_argument("build_sector: too many cavities for the state packing");

    SectorMatrix sector;
    auto& basis = sector.basis;
    basis.cavities = cavities;
    basis.excitations = excitations;
    basis.n_max = n_max;
    enumerate_states(cavities, 0, excitations, n_max, 0, basis.states);
    if (basis.states.empty())
        throw std::invalid_argument("build_sector: empty sector (truncation too tight)");

    const std::size_t dim = basis.dim();
    const std::size_t per_row = 1 + cavities + 2 * std::size_t(cavities);
    if (dim * per_row > nnz_cap) {
        std::ostringstream msg;
        msg << "build_sector: estimated nonzeros " << dim * per_row << " exceed cap "
            << nnz_cap;
        throw std::runtime_error(msg.str());
    }

    std::vector<std::pair<int, int>> bonds;
    if (bc == Boundary::ring)
        for (int r = 0; r < cavities; ++r) bonds.emplace_back(r, (r + 1) % cavities);
    else
        for (int r = 0; r + 1 < cavities; ++r) bonds.emplace_back(r, r + 1);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(dim * per_row);
    auto connect = [&](int row, std::uint64_t target, double value) {
        const int col = basis.index_of(target);
        if (col < 0)
            throw std::logic_error("build_sector: excitation-number leak in assembly");
        triplets.emplace_back(row, col, value);
        triplets.emplace_back(col, row, value);
    };

    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t s = basis.states[i];
        double diag = 0.0;
        for (int r = 0; r < cavities; ++r)
            diag += site.omega * basis.photons(s, r) + site.epsilon * basis.atom(s, r);
        triplets.emplace_back(int(i), int(i), diag);

        for (int r = 0; r < cavities; ++r) {
            // photon absorption: |p, g⟩ -> |p-1, e⟩ with amplitude beta sqrt(p)
            const int p = basis.photons(s, r);
            if (basis.atom(s, r) == 0 && p >= 1)
                connect(int(i), with_site(s, cavities, r, p - 1, 1),
                        site.beta * std::sqrt(double(p)));
        }
        for (const auto& [r, q] : bonds) {
            // move one photon q -> r: amplitude -kappa sqrt(p_q) sqrt(p_r + 1)
            const int pq = basis.photons(s, q), pr = basis.photons(s, r);
            if (pq >= 1 && pr < n_max) {
                std::uint64_t t = with_site(s, cavities, q, pq - 1, basis.atom(s, q));
                t = with_site(t, cavities, r, pr + 1, basis.atom(s, r));
                connect(int(i), t, -kappa * std::sqrt(double(pq)) * std::sqrt(double(pr + 1)));
            }
        }
    }

    sector.hamiltonian.resize(int(dim), int(dim));
    sector.hamiltonian.setFromTriplets(triplets.begin(), triplets.end());
    return sector;
}

double ground_energy(const SectorMatrix& sector) {
    const auto& h = sector.hamiltonian;
    if (h.rows() == 1) return h.coeff(0, 0);
    const double tol = 1e-10 * std::max(1.0, matrix_inf_norm(h));
    if (h.rows() < 2000) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h),
                                                          Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("ground_energy: dense eigensolve failed at dim " +
                                     std::to_string(h.rows()));
        return es.eigenvalues()(0);
    }
    return lanczos_lowest_eigenvalue(h, tol);
}

double ground_energy(int cavities, int excitations, const SiteParams& site, double kappa,
                     Boundary bc) {
    if (excitations == 0) return 0.0;
    return ground_energy(build_sector(cavities, excitations, site, kappa, bc));
}

EdSpectrum sector_ground_energies(int cavities, const SiteParams& site, double kappa,
                                  Boundary bc, int n_top) {
    EdSpectrum spectrum;
    spectrum.cavities = cavities;
    spectrum.bc = bc;
    spectrum.site = site;
    spectrum.kappa = kappa;
    spectrum.e0.reserve(n_top + 1);
    for (int n = 0; n <= n_top; ++n)
        spectrum.e0.push_back(ground_energy(cavities, n, site, kappa, bc));
    return spectrum;
}

std::vector<MeanExcitationPoint> mean_excitation_curve(const EdSpectrum& spectrum,
                                                       const std::vector<double>& mu_axis) {
    if (spectrum.e0.empty())
        throw std::invalid_argument("mean_excitation_curve: empty spectrum");
    std::vector<MeanExcitationPoint> curve;
    curve.reserve(mu_axis.size());
    for (double mu : mu_axis) {
        MeanExcitationPoint point;
        point.mu = mu;
        double best = spectrum.e0[0];
        for (int n = 1; n < int(spectrum.e0.size()); ++n)
            if (const double v = spectrum.e0[n] - mu * n; v < best) {
                best = v;
                point.n_star = n;
            }
        point.rho = double(point.n_star) / spectrum.cavities;
        point.truncated = point.n_star + 1 == int(spectrum.e0.size());
        curve.push_back(point);
    }
    return curve;
}

std::vector<PlateauWindow> plateau_boundaries(int cavities, const SiteParams& site,
                                              Boundary bc,
                                              const std::vector<double>& kappa_grid,
                                              int target, int threads) {
    if (target < 1) throw std::invalid_argument("plateau_boundaries: target must be >= 1");
    const int plateau_n = target * cavities;
    std::vector<PlateauWindow> curve(kappa_grid.size());
    parallel_for(kappa_grid.size(), threads, [&](std::size_t i) {
        const auto spectrum =
            sector_ground_energies(cavities, site, kappa_grid[i], bc, plateau_n + 2);
        const auto& e0 = spectrum.e0;
        PlateauWindow window;
        window.kappa = kappa_grid[i];
        window.mu_lower = -std::numeric_limits<double>::infinity();
        window.mu_upper = std::numeric_limits<double>::infinity();
        for (int n = 0; n < plateau_n; ++n)
            window.mu_lower =
                std::max(window.mu_lower, (e0[plateau_n] - e0[n]) / (plateau_n - n));
        for (int n = plateau_n + 1; n < int(e0.size()); ++n)
            window.mu_upper =
                std::min(window.mu_upper, (e0[n] - e0[plateau_n]) / (n - plateau_n));
        window.absent = !(window.mu_upper > window.mu_lower);
        curve[i] = window;
    });
    return curve;
}

Eigen::VectorXd ring_single_excitation_spectrum(int cavities, const SiteParams& site,
                                                double kappa, double mu) {
    const auto sector = build_sector(cavities, 1, site, kappa, Boundary::ring);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(sector.hamiltonian), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("ring_single_excitation_spectrum: eigensolve failed");
    return es.eigenvalues().array() - mu;
}

}  // namespace jch

// exact_diag.hpp — exact diagonalization of the full lattice Hamiltonian on M
// cavities in fixed-excitation sectors: bases, ground energies, mean-excitation
// plateaux, and the single-excitation ring oracle.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "jch/jc_core.hpp"

namespace jch {

enum class Boundary { ring, open };

// Occupation basis at fixed total excitation number N: per cavity a photon
// count and an atom flag, sum(photons + atom) = N, photons <= n_max.
// States are packed little-endian by site into 6-bit fields (site 0 highest),
// so ascending key order is lexicographic order on (p_0, a_0, p_1, a_1, ...).
struct SectorBasis {
    int cavities{0};
    int excitations{0};
    int n_max{0};
    std::vector<std::uint64_t> states;  // ascending

    std::size_t dim() const { return states.size(); }
    int index_of(std::uint64_t key) const;  // -1 when absent

    static std::uint64_t pack(const std::vector<int>& photons,
                              const std::vector<int>& atoms);
    int photons(std::uint64_t key, int site) const;
    int atom(std::uint64_t key, int site) const;
};

struct SectorMatrix {
    SectorBasis basis;
    Eigen::SparseMatrix<double> hamiltonian;  // real symmetric, both triangles
};

// Uniform-site sector Hamiltonian (no -mu N term; N is constant per sector).
// n_max < 0 selects the exact cap n_max = N. Throws when the estimated
// nonzero count exceeds nnz_cap, and on any excitation-number leak
// (assembly-time [N, H] = 0 check).
SectorMatrix build_sector(int cavities, int excitations, const SiteParams& site,
                          double kappa, Boundary bc, int n_max = -1,
                          std::size_t nnz_cap = 2000000);

// Extremal (lowest) eigenvalue by Lanczos with full reorthogonalization and a
// deterministic start vector; the Ritz pair is verified to ||Hv - tv|| <= tol.
double lanczos_lowest_eigenvalue(const Eigen::SparseMatrix<double>& h, double tol_abs);

// Lowest eigenvalue: dense solve below dimension 2000, Lanczos above. The
// returned value is residual-verified to 1e-10 * ||H||.
double ground_energy(const SectorMatrix& sector);
double ground_energy(int cavities, int excitations, const SiteParams& site,
                     double kappa, Boundary bc);

// E0(N) for N = 0..n_top.
struct EdSpectrum {
    int cavities{0};
    Boundary bc{Boundary::ring};
    SiteParams site;
    double kappa{0.0};
    std::vector<double> e0;
};

EdSpectrum sector_ground_energies(int cavities, const SiteParams& site, double kappa,
                                  Boundary bc, int n_top);

// Step function N*(mu) = argmin_N [E0(N) - mu N], ties to smaller N.
struct MeanExcitationPoint {
    double mu{0.0};
    int n_star{0};
    double rho{0.0};  // N*/M
    bool truncated{false};  // N* hit the top of the computed range
};

std::vector<MeanExcitationPoint> mean_excitation_curve(const EdSpectrum& spectrum,
                                                       const std::vector<double>& mu_axis);

// mu window of the N = target * M plateau per kappa, located exactly as
// energy-difference crossings. absent = true marks a closed plateau.
struct PlateauWindow {
    double kappa{0.0};
    double mu_lower{0.0};
    double mu_upper{0.0};
    bool absent{false};
};

// kappa grid points are independent work units; each eigensolve stays
// single-threaded, so results are deterministic regardless of scheduling.
std::vector<PlateauWindow> plateau_boundaries(int cavities, const SiteParams& site,
                                              Boundary bc,
                                              const std::vector<double>& kappa_grid,
                                              int target, int threads = 0);

// All 2M eigenvalues of the ring N = 1 sector, shifted by -mu: the oracle that
// must reproduce the n = 0 particle bands at k = 2 pi j / M. (M = 2 rings
// carry a doubled bond and are excluded from the oracle.)
Eigen::VectorXd ring_single_excitation_spectrum(int cavities, const SiteParams& site,
                                                double kappa, double mu);

}  // namespace jch

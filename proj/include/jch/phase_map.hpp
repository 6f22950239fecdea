// phase_map.hpp — Mott-lobe boundaries, gap maps, and doped-lattice
// classification built on the Bloch bands.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jch/bloch_engine.hpp"

namespace jch {

// Signed band-minimum gaps: positive inside a Mott lobe, negative outside.
// hole is +infinity when the filling pattern carries no hole states.
struct GapPair {
    double particle{0.0};
    double hole{0.0};
    double min() const { return particle < hole ? particle : hole; }
};

GapPair excitation_gaps(const UnitCellSpec& cell, int k_count = 65);

// Gap-closure chemical potentials for a fixed filling pattern at fixed kappa.
// Both gaps are exactly linear in mu, so the boundaries come from one band
// evaluation at mu = 0 each: mu_upper = particle band minimum, mu_lower =
// -(hole band minimum). mu_lower is -infinity for hole-free patterns.
struct LobeWindow {
    double mu_lower{0.0};
    double mu_upper{0.0};
    bool closed() const { return !(mu_upper > mu_lower); }  // tip passed
    double width() const { return mu_upper - mu_lower; }
};

LobeWindow lobe_boundary(const std::vector<SiteParams>& sites,
                         const std::vector<int>& fillings, double kappa,
                         int k_count = 65);

// Boundary curves of one lobe across a hopping grid.
struct LobeBoundary {
    std::vector<int> fillings;
    std::vector<double> kappa_grid;
    std::vector<double> mu_upper;  // particle-gap closure per kappa
    std::vector<double> mu_lower;  // hole-gap closure per kappa (-inf if no holes)
};

LobeBoundary lobe_boundary_curve(const std::vector<SiteParams>& sites,
                                 const std::vector<int>& fillings,
                                 const std::vector<double>& kappa_grid,
                                 int k_count = 65);

// Hopping rate closing the lobe, located by bisection on the (verified
// monotone) width to relative tolerance 1e-8. Throws if the lobe is closed at
// kappa = 0 or the bracket cannot be established.
double lobe_tip(const std::vector<SiteParams>& sites, const std::vector<int>& fillings,
                int k_count = 65, double rel_tol = 1e-8);

// Per-site atomic-limit fillings of a multi-site cell at chemical potential mu.
std::vector<int> doped_background(const std::vector<SiteParams>& sites, double mu,
                                  int n_max = 20);

// 2D sweep over (kappa, mu). Backgrounds follow the atomic-limit rule per
// point; grid points are independent and computed by a worker pool.
struct PhaseGrid {
    std::vector<double> kappa_axis;
    std::vector<double> mu_axis;
    Eigen::MatrixXd gap;           // min(particle, hole) clipped at 0
    Eigen::MatrixXd raw_gap;       // signed, kept for boundary location
    Eigen::MatrixXd raw_particle;  // signed particle gap
    Eigen::MatrixXd raw_hole;      // signed hole gap (+inf if no hole states)
    Eigen::MatrixXi pattern;       // row kappa, col mu; index into patterns, -2 = failed
    std::vector<std::vector<int>> patterns;
    std::vector<std::string> point_errors;  // messages for failed points
    double beta_ref{1.0};

    double mott_threshold() const { return 1e-9 * beta_ref; }
    bool is_mott(int i, int j) const { return gap(i, j) > mott_threshold(); }
    std::string label(int i, int j) const;
};

struct GapMapOptions {
    int k_count{65};
    int n_max{20};
    int threads{0};  // 0 = hardware concurrency
};

PhaseGrid gap_map(const std::vector<SiteParams>& sites,
                  const std::vector<double>& kappa_axis,
                  const std::vector<double>& mu_axis, const GapMapOptions& opts = {});

// Checks M01 = M0 ∩ M1 on shared axes for every kappa column <= kappa_max.
// The sets count as equal when every grid point where the doped indicator
// disagrees with the pointwise intersection lies within mu_tol of a boundary
// of either set (boundaries refined by linear interpolation of the signed
// gaps). max_deviation is the largest distance from a disagreeing point to
// the nearest boundary.
struct IntersectionReport {
    bool equal{false};
    double max_deviation{0.0};
    int columns_checked{0};
};

IntersectionReport intersection_check(const PhaseGrid& tuned, const PhaseGrid& detuned,
                                      const PhaseGrid& doped, double kappa_max,
                                      double mu_tol);

}  // namespace jch

// meanfield.hpp — decoupling-approximation treatment of the lattice model:
// single-site Hamiltonian with order-parameter drive, variational psi, and the
// Mott/superfluid boundary.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jch/jc_core.hpp"

namespace jch {

struct MfProblem {
    SiteParams site;
    double kappa{0.0};
    double mu{0.0};
    int z{2};           // coordination number (1D default)
    int n_max{25};      // photon-number truncation
    double psi_max{6.0};
};

struct MfResult {
    double psi_star{0.0};
    double ground_energy{0.0};
    bool converged{false};  // stationarity |⟨a⟩ - psi*| <= 1e-6 held
    int evaluations{0};
};

// H(psi) over the basis {|g,n⟩, |e,n⟩ : 0 <= n <= n_max}, psi real >= 0
// (the U(1) phase is gauged away). Includes the scalar z kappa psi^2 shift.
// Ordering: |g,0..n_max⟩ then |e,0..n_max⟩.
Eigen::MatrixXd mf_hamiltonian(const MfProblem& problem, double psi);

// Minimizes the ground eigenvalue over psi in [0, psi_max]: coarse linear +
// logarithmic scan, then golden-section refinement to 1e-10 in psi. Throws on
// truncation violation (ground occupancy at n_max >= 1e-10) or when the
// minimum is not bracketed (psi_max too small).
MfResult mf_order_parameter(const MfProblem& problem);

struct MfBoundaryPoint {
    double mu{0.0};
    double kappa_c{0.0};
    bool transition_found{false};  // false: superfluid already at kappa -> 0+
};

// Onset kappa of psi* > 1e-6 per mu, bisected to 1e-6 * beta in kappa.
std::vector<MfBoundaryPoint> mf_boundary(const SiteParams& site, int z,
                                         const std::vector<double>& mu_axis,
                                         int n_max = 25, int threads = 0);

}  // namespace jch

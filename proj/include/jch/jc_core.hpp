// jc_core.hpp — single-cavity Jaynes-Cummings states, energies, atomic-limit filling
#pragma once

#include <stdexcept>
#include <string>

namespace jch {

// Physical constants of one cavity (hbar = 1). Detuning is always derived,
// never stored.
struct SiteParams {
    double omega{0.0};    // cavity resonance frequency
    double epsilon{0.0};  // atomic transition energy
    double beta{1.0};     // atom-photon coupling, > 0

    double delta() const { return omega - epsilon; }

    // Convenience for the usual parametrization (omega, Delta, beta).
    static SiteParams from_detuning(double omega, double delta, double beta) {
        return SiteParams{omega, omega - delta, beta};
    }

    void validate() const {
        if (!(beta > 0.0))
            throw std::invalid_argument("SiteParams: beta must be > 0 (got " +
                                        std::to_string(beta) + ")");
    }
};

enum class Branch { lower, upper };

// Polariton |±,n⟩: superposition of |g,n⟩ and |e,n-1⟩.
// For n = 0 the state is |g,0⟩ with zero energy; by convention c_g = 1,
// c_e = 0 and the branch is reported as lower.
struct DressedState {
    int n{0};
    Branch branch{Branch::lower};
    double c_g{1.0};   // amplitude of |g,n⟩
    double c_e{0.0};   // amplitude of |e,n-1⟩
    double energy{0.0};
};

// Generalized Rabi frequency chi(n) = sqrt(n beta^2 + delta^2/4).
double rabi_chi(int n, const SiteParams& site);

DressedState dressed_state(int n, Branch branch, const SiteParams& site);

// E_{|-,n⟩}; equals 0 at n = 0.
double dressed_ground_energy(int n, const SiteParams& site);

// Filling n* minimizing E_{|-,n⟩} - mu n over 0 <= n <= n_max, ties toward
// smaller n. Throws if the minimizer sits at n_max (truncation not trusted).
int atomic_limit_filling(const SiteParams& site, double mu, int n_max = 20);

}  // namespace jch

#include "jch/jc_core.hpp"

#include <cmath>

namespace jch {

double rabi_chi(int n, const SiteParams& site) {
    if (n < 0) throw std::invalid_argument("rabi_chi: n must be >= 0");
    site.validate();
    const double d = site.delta();
    return std::sqrt(n * site.beta * site.beta + 0.25 * d * d);
}

DressedState dressed_state(int n, Branch branch, const SiteParams& site) {
    if (n < 0) throw std::invalid_argument("dressed_state: n must be >= 0");
    site.validate();
    if (n == 0) return DressedState{0, Branch::lower, 1.0, 0.0, 0.0};

    const double d = site.delta();
    const double chi = rabi_chi(n, site);
    const double bg = site.beta * std::sqrt(double(n));

    // |±,n⟩ = [beta sqrt(n)|g,n⟩ + (-d/2 ± chi)|e,n-1⟩] / sqrt(2 chi^2 ∓ chi d)
    double ce_num, norm2;
    if (branch == Branch::lower) {
        ce_num = -0.5 * d - chi;
        norm2 = 2.0 * chi * chi + chi * d;
    } else {
        // chi - d/2 = n beta^2 / (chi + d/2), stable for large positive d
        ce_num = bg * bg / (chi + 0.5 * d);
        norm2 = 2.0 * chi * ce_num;
    }
    const double norm = std::sqrt(norm2);

    DressedState s;
    s.n = n;
    s.branch = branch;
    s.c_g = bg / norm;
    s.c_e = ce_num / norm;
    s.energy = n * site.omega - 0.5 * d + (branch == Branch::lower ? -chi : chi);
    return s;
}

double dressed_ground_energy(int n, const SiteParams& site) {
    if (n == 0) return 0.0;
    return n * site.omega - 0.5 * site.delta() - rabi_chi(n, site);
}

int atomic_limit_filling(const SiteParams& site, double mu, int n_max) {
    if (n_max < 1) throw std::invalid_argument("atomic_limit_filling: n_max must be >= 1");
    int best = 0;
    double best_value = 0.0;  // E_{|-,0⟩} - mu*0
    for (int n = 1; n <= n_max; ++n) {
        const double value = dressed_ground_energy(n, site) - mu * n;
        if (value < best_value) {
            best_value = value;
            best = n;
        }
    }
    if (best == n_max)
        throw std::runtime_error(
            "atomic_limit_filling: minimizer hit n_max = " + std::to_string(n_max) +
            "; raise the truncation");
    return best;
}

}  // namespace jch

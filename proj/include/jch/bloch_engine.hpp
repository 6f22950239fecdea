// bloch_engine.hpp — one-polariton / one-hole Bloch blocks for 1D unit cells,
// plus the closed-form uniform-lattice dispersions used as cross-checks.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "jch/jc_core.hpp"

namespace jch {

enum class Sector { particle, hole };

// Periodic 1D lattice described by one unit cell of m >= 1 sites. The hopping
// rate kappa and chemical potential mu are site independent.
struct UnitCellSpec {
    std::vector<SiteParams> sites;
    std::vector<int> fillings;  // background excitations n_r per site
    double kappa{0.0};
    double mu{0.0};

    int size() const { return static_cast<int>(sites.size()); }
    void validate() const;

    static UnitCellSpec uniform(const SiteParams& site, int filling, double kappa,
                                double mu) {
        return UnitCellSpec{{site}, {filling}, kappa, mu};
    }
};

// Number of defect basis states a site contributes. Particle sectors always
// hold {|g,n+1⟩, |e,n⟩}; hole sectors lose |e,n-2⟩ at n = 1 and vanish at n = 0.
int sector_site_dim(int filling, Sector sector);

// Matrix elements of the photon operator between the background dressed state
// and the defect bare states:
//   particle: w = (c_g(n) sqrt(n+1), c_e(n) sqrt(n))
//   hole:     u = (c_g(n) sqrt(n),   c_e(n) sqrt(n-1))
// Only the first sector_site_dim(n, sector) components are meaningful.
Eigen::Vector2d hop_vector(const SiteParams& site, int n, Sector sector);

// One Bloch-reduced block at crystal momentum k (radians per cell, reduced
// zone [-pi, pi]). Entries are energies relative to the uniform background,
// grand-canonical (-mu dN included).
struct BlochBlock {
    double k{0.0};
    Sector sector{Sector::particle};
    Eigen::MatrixXcd matrix;

    struct BasisLabel {
        int site;   // index within the cell
        char bare;  // 'g' or 'e'
    };
    std::vector<BasisLabel> basis_labels;
};

// Assemble the Hermitian block. defect_site is retained for API symmetry and
// validated only; the block always spans the whole cell. Throws when the hole
// sector is empty (all fillings zero) or on a non-Hermitian assembly.
BlochBlock build_block(const UnitCellSpec& cell, Sector sector, int defect_site,
                       double k);

// Ascending real eigenvalues; every pair is residual-checked against
// 1e-10 * ||H||, failures throw with the offending parameters attached.
Eigen::VectorXd diagonalize(const BlochBlock& block);

// Closed-form uniform-lattice dispersions (validators; the block assembly is
// the authoritative path).
//
// Particle, background filling n >= 0:
//   E_±(n,k) = w - mu + chi(n) - h ± sqrt(h^2 - g + chi(n+1)^2)
//   h = [n + c_g^2(n)] kappa cos k
//   g = {4(n+1) sqrt(n) beta c_e c_g + [(n+1) c_g^2 - n c_e^2] Delta} kappa cos k
// Caveat: at n = 0 with Delta != 0 the chi(0) = |Delta|/2 prefactor differs
// from the direct construction (which gives -Delta/2); the block is
// authoritative there.
std::pair<double, double> closed_form_particle(int n, double k, const SiteParams& site,
                                               double kappa, double mu);

// Hole, background filling n >= 1:
//   E_±(n,k) = mu - w + chi(n) - h' ± sqrt(h'^2 - g' + chi(n-1)^2)
//   h' = [n - c_e^2(n)] kappa cos k
//   g' = {4(n-1) sqrt(n) beta c_e c_g + [n c_g^2 - (n-1) c_e^2] Delta} kappa cos k
// At n = 1 the pair contains one spurious flat member; the direct 1x1 block
// value always equals the k-dependent member.
std::pair<double, double> closed_form_hole(int n, double k, const SiteParams& site,
                                           double kappa, double mu);

struct Band {
    Sector sector{Sector::particle};
    std::vector<double> k_grid;
    Eigen::MatrixXd energies;  // k_grid.size() x d, ascending per row
};

// Uniform k grid over one reduced zone [-pi, pi], endpoints included.
Band sample_band(const UnitCellSpec& cell, Sector sector, int k_count);

}  // namespace jch

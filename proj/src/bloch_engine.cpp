#include "jch/bloch_engine.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace jch {

namespace {

double reference_scale(const UnitCellSpec& cell) {
    double s = 0.0;
    for (const auto& site : cell.sites) s = std::max(s, site.beta);
    return s;
}

}  // namespace

void UnitCellSpec::validate() const {
    if (sites.empty()) throw std::invalid_argument("UnitCellSpec: cell must hold >= 1 site");
    if (fillings.size() != sites.size())
        throw std::invalid_argument("UnitCellSpec: fillings length must equal sites length");
    for (const auto& s : sites) s.validate();
    for (int n : fillings)
        if (n < 0) throw std::invalid_argument("UnitCellSpec: fillings must be >= 0");
    if (kappa < 0.0) throw std::invalid_argument("UnitCellSpec: kappa must be >= 0");
}

int sector_site_dim(int filling, Sector sector) {
    if (filling < 0) throw std::invalid_argument("sector_site_dim: filling must be >= 0");
    if (sector == Sector::particle) return 2;
    if (filling == 0) return 0;
    return filling == 1 ? 1 : 2;
}

Eigen::Vector2d hop_vector(const SiteParams& site, int n, Sector sector) {
    if (sector == Sector::hole && n < 1)
        throw std::invalid_argument("hop_vector: hole sector requires filling >= 1");
    const auto bg = dressed_state(n, Branch::lower, site);
    if (sector == Sector::particle)
        return {bg.c_g * std::sqrt(double(n + 1)), bg.c_e * std::sqrt(double(n))};
    return {bg.c_g * std::sqrt(double(n)), bg.c_e * std::sqrt(double(n - 1))};
}

BlochBlock build_block(const UnitCellSpec& cell, Sector sector, int defect_site,
                       double k) {
    cell.validate();
    const int m = cell.size();
    if (defect_site < 0 || defect_site >= m)
        throw std::invalid_argument("build_block: defect_site out of range");
    if (sector == Sector::hole && cell.fillings[defect_site] < 1 && m == 1)
        throw std::invalid_argument("build_block: hole defect requires filling >= 1");

    std::vector<int> dims(m), offsets(m);
    int d = 0;
    for (int r = 0; r < m; ++r) {
        dims[r] = sector_site_dim(cell.fillings[r], sector);
        offsets[r] = d;
        d += dims[r];
    }
    if (d == 0)
        throw std::invalid_argument("build_block: hole sector is empty (all fillings zero)");

    BlochBlock block;
    block.k = k;
    block.sector = sector;
    block.matrix = Eigen::MatrixXcd::Zero(d, d);
    block.basis_labels.reserve(d);

    // Onsite 2x2 (or reduced) blocks: bare defect energies relative to the
    // background dressed state of the same site, with -mu dN folded in.
    const double dn = sector == Sector::particle ? 1.0 : -1.0;
    for (int r = 0; r < m; ++r) {
        if (dims[r] == 0) continue;
        const auto& site = cell.sites[r];
        const int n = cell.fillings[r];
        const int nd = n + (sector == Sector::particle ? 1 : -1);  // defect excitations
        const double e_bg = dressed_ground_energy(n, site);
        const double shift = -cell.mu * dn - e_bg;

        const int o = offsets[r];
        block.matrix(o, o) = nd * site.omega + shift;
        block.basis_labels.push_back({r, 'g'});
        if (dims[r] == 2) {
            block.matrix(o + 1, o + 1) = site.epsilon + (nd - 1) * site.omega + shift;
            const double coupling = site.beta * std::sqrt(double(nd));
            block.matrix(o, o + 1) = coupling;
            block.matrix(o + 1, o) = coupling;
            block.basis_labels.push_back({r, 'e'});
        }
    }

    // Hopping: rank-1 blocks -kappa v_r v_s^T between neighbors. Intra-cell
    // bonds carry phase 1, the cell-boundary bond carries e^{+ik} (rightward);
    // for m = 1 the two boundary directions combine to 2 cos k.
    std::vector<Eigen::Vector2d> hop(m, Eigen::Vector2d::Zero());
    for (int r = 0; r < m; ++r)
        if (dims[r] > 0) hop[r] = hop_vector(cell.sites[r], cell.fillings[r], sector);

    auto add_bond = [&](int r, int s, std::complex<double> phase) {
        if (dims[r] == 0 || dims[s] == 0) return;
        for (int a = 0; a < dims[r]; ++a)
            for (int b = 0; b < dims[s]; ++b) {
                const std::complex<double> v = -cell.kappa * hop[r](a) * hop[s](b) * phase;
                block.matrix(offsets[r] + a, offsets[s] + b) += v;
                block.matrix(offsets[s] + b, offsets[r] + a) += std::conj(v);
            }
    };
    for (int r = 0; r + 1 < m; ++r) add_bond(r, r + 1, 1.0);
    add_bond(m - 1, 0, std::exp(std::complex<double>(0.0, k)));

    const double scale = std::max(1.0, block.matrix.norm());
    if ((block.matrix - block.matrix.adjoint()).norm() > 1e-14 * scale)
        throw std::logic_error("build_block: non-Hermitian assembly");
    return block;
}

Eigen::VectorXd diagonalize(const BlochBlock& block) {
    const auto& h = block.matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const double hnorm = std::max(h.norm(), 1e-300);
    bool ok = solver.info() == Eigen::Success;
    if (ok) {
        for (int i = 0; i < h.rows(); ++i) {
            const auto v = solver.eigenvectors().col(i);
            if ((h * v - solver.eigenvalues()(i) * v).norm() > 1e-10 * hnorm) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "diagonalize: eigensolve failed (sector="
            << (block.sector == Sector::particle ? "particle" : "hole")
            << ", k=" << block.k << ", dim=" << h.rows() << ")";
        throw std::runtime_error(msg.str());
    }
    return solver.eigenvalues();
}

std::pair<double, double> closed_form_particle(int n, double k, const SiteParams& site,
                                               double kappa, double mu) {
    if (n < 0) throw std::invalid_argument("closed_form_particle: n must be >= 0");
    site.validate();
    const auto bg = dressed_state(n, Branch::lower, site);
    const double d = site.delta();
    const double chi_n = rabi_chi(n, site);
    const double chi_n1 = rabi_chi(n + 1, site);
    const double t = kappa * std::cos(k);
    const double cg2 = bg.c_g * bg.c_g, ce2 = bg.c_e * bg.c_e;

    const double h = (n + cg2) * t;
    const double g =
        (4.0 * (n + 1) * std::sqrt(double(n)) * site.beta * bg.c_e * bg.c_g +
         ((n + 1) * cg2 - n * ce2) * d) *
        t;
    const double root = std::sqrt(h * h - g + chi_n1 * chi_n1);
    const double base = site.omega - mu + chi_n - h;
    return {base - root, base + root};
}

std::pair<double, double> closed_form_hole(int n, double k, const SiteParams& site,
                                           double kappa, double mu) {
    if (n < 1) throw std::invalid_argument("closed_form_hole: n must be >= 1");
    site.validate();
    const auto bg = dressed_state(n, Branch::lower, site);
    const double d = site.delta();
    const double chi_n = rabi_chi(n, site);
    const double chi_nm1 = rabi_chi(n - 1, site);
    const double t = kappa * std::cos(k);
    const double cg2 = bg.c_g * bg.c_g, ce2 = bg.c_e * bg.c_e;

    const double hp = (n - ce2) * t;
    const double gp =
        (4.0 * (n - 1) * std::sqrt(double(n)) * site.beta * bg.c_e * bg.c_g +
         (n * cg2 - (n - 1) * ce2) * d) *
        t;
    const double root = std::sqrt(hp * hp - gp + chi_nm1 * chi_nm1);
    const double base = mu - site.omega + chi_n - hp;
    return {base - root, base + root};
}

Band sample_band(const UnitCellSpec& cell, Sector sector, int k_count) {
    if (k_count < 2) throw std::invalid_argument("sample_band: k_count must be >= 2");
    cell.validate();

    Band band;
    band.sector = sector;
    band.k_grid.resize(k_count);
    const double pi = std::numbers::pi;
    for (int i = 0; i < k_count; ++i)
        band.k_grid[i] = -pi + 2.0 * pi * i / (k_count - 1);

    const auto first = diagonalize(build_block(cell, sector, 0, band.k_grid[0]));
    band.energies.resize(k_count, first.size());
    band.energies.row(0) = first;
    for (int i = 1; i < k_count; ++i)
        band.energies.row(i) = diagonalize(build_block(cell, sector, 0, band.k_grid[i]));
    return band;
}

}  // namespace jch

#include "jch/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "jch/cli/config.hpp"
#include "jch/exact_diag.hpp"
#include "jch/meanfield.hpp"
#include "jch/phase_map.hpp"

namespace jch::accept {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return v;
}

struct Timer {
    std::chrono::steady_clock::time_point start{std::chrono::steady_clock::now()};
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

// A lobe is a maximal Mott segment of fixed filling pattern; adjacent lobes
// can touch through near-zero-gap points, so segments split on pattern
// changes, not only on superfluid gaps.
int count_lobes(const PhaseGrid& grid, int row) {
    int count = 0, start = -1;
    const int nm = int(grid.mu_axis.size());
    for (int j = 0; j <= nm; ++j) {
        const bool mott = j < nm && grid.is_mott(row, j);
        if (start >= 0 && (!mott || grid.pattern(row, j) != grid.pattern(row, start))) {
            ++count;
            start = -1;
        }
        if (mott && start < 0) start = j;
    }
    return count;
}

// ---------------------------------------------------------------------------
// 1. closed-form vs assembled-block equivalence
CriterionResult criterion_equivalence() {
    Timer timer;
    CriterionResult r{1, "closed-form/block equivalence"};
    const double mu = -0.3;
    double max_dev = 0.0;
    for (int n = 1; n <= 6; ++n)
        for (double delta : {-1.0, 0.0, 1.0})
            for (double kappa : {0.001, 0.01, 0.1}) {
                const auto site = SiteParams::from_detuning(0.0, delta, 1.0);
                auto cell = UnitCellSpec::uniform(site, n, kappa, mu);
                for (int i = 0; i < 101; ++i) {
                    const double k = -pi + 2 * pi * i / 100.0;
                    const auto pev = diagonalize(build_block(cell, Sector::particle, 0, k));
                    const auto [pm, pp] = closed_form_particle(n, k, site, kappa, mu);
                    max_dev = std::max({max_dev, std::abs(pev(0) - pm),
                                        std::abs(pev(1) - pp)});

                    const auto hev = diagonalize(build_block(cell, Sector::hole, 0, k));
                    const auto [hm, hp] = closed_form_hole(n, k, site, kappa, mu);
                    if (n >= 2)
                        max_dev = std::max({max_dev, std::abs(hev(0) - hm),
                                            std::abs(hev(1) - hp)});
                    else
                        // the single direct eigenvalue equals the physical
                        // (k-dependent) member of the pair
                        max_dev = std::max(max_dev, std::min(std::abs(hev(0) - hm),
                                                             std::abs(hev(0) - hp)));
                }
            }
    r.seconds = timer.seconds();
    r.pass = max_dev <= 1e-10 && r.seconds < 5.0;
    r.detail = "max |E_block - E_closed| = " + fmt(max_dev) + " beta";
    return r;
}

// ---------------------------------------------------------------------------
// 2. atomic-limit lobe boundaries from the closed forms
CriterionResult criterion_atomic_lobes() {
    Timer timer;
    CriterionResult r{2, "atomic-limit lobe boundaries"};
    double max_dev = 0.0;
    for (double delta : {0.0, 1.0}) {
        const auto site = SiteParams::from_detuning(0.0, delta, 1.0);
        for (int n = 1; n <= 5; ++n) {
            // linear in mu, so the closure mu equals the band value at mu = 0
            const double upper = closed_form_particle(n, 0.0, site, 0.0, 0.0).first;
            const double lower = -closed_form_hole(n, 0.0, site, 0.0, 0.0).first;
            const double chi_nm1 = rabi_chi(n - 1, site), chi_n = rabi_chi(n, site),
                         chi_np1 = rabi_chi(n + 1, site);
            max_dev = std::max(max_dev, std::abs(upper - (chi_n - chi_np1)));
            max_dev = std::max(max_dev, std::abs(lower - (chi_nm1 - chi_n)));
        }
    }
    r.seconds = timer.seconds();
    r.pass = max_dev <= 1e-12;
    r.detail = "max boundary error = " + fmt(max_dev) + " beta";
    return r;
}

// ---------------------------------------------------------------------------
// 3. ring oracle: N = 1 exact diagonalization vs n = 0 Bloch bands
CriterionResult criterion_ring_oracle() {
    Timer timer;
    CriterionResult r{3, "single-excitation ring oracle"};
    const double kappa = 0.05, mu = -0.4;
    double max_dev = 0.0;
    for (int m : {4, 6, 8})
        for (double delta : {0.0, 1.0}) {
            const auto site = SiteParams::from_detuning(0.0, delta, 1.0);
            const auto ed = ring_single_excitation_spectrum(m, site, kappa, mu);
            auto cell = UnitCellSpec::uniform(site, 0, kappa, mu);
            std::vector<double> bloch;
            for (int j = 0; j < m; ++j) {
                const auto ev =
                    diagonalize(build_block(cell, Sector::particle, 0, 2 * pi * j / m));
                bloch.push_back(ev(0));
                bloch.push_back(ev(1));
            }
            std::sort(bloch.begin(), bloch.end());
            for (int i = 0; i < ed.size(); ++i)
                max_dev = std::max(max_dev, std::abs(ed(i) - bloch[std::size_t(i)]));
        }
    r.seconds = timer.seconds();
    r.pass = max_dev <= 1e-10 && r.seconds < 1.0;
    r.detail = "max |E_ED - E_Bloch| = " + fmt(max_dev) + " beta";
    return r;
}

// ---------------------------------------------------------------------------
// 4. one-polariton error above unit filling scales as kappa^2
CriterionResult criterion_error_scaling() {
    Timer timer;
    CriterionResult r{4, "one-polariton error scaling"};
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    const int m = 6;
    auto error_at = [&](double kappa) {
        const double ed = ground_energy(m, m + 1, site, kappa, Boundary::ring) -
                          ground_energy(m, m, site, kappa, Boundary::ring);
        auto cell = UnitCellSpec::uniform(site, 1, kappa, 0.0);
        double bloch = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j)
            bloch = std::min(bloch,
                             diagonalize(build_block(cell, Sector::particle, 0,
                                                     2 * pi * j / m))(0));
        return ed - bloch;
    };
    const double e1 = error_at(0.01), e2 = error_at(0.02);
    const double ratio = e2 / e1;
    r.seconds = timer.seconds();
    r.pass = ratio >= 3.0 && ratio <= 5.0;
    r.detail = "err(0.02)/err(0.01) = " + fmt(ratio) + " (err(0.01) = " + fmt(e1) +
               " beta)";
    return r;
}

// ---------------------------------------------------------------------------
// 5. band-structure point check at the reference working point
CriterionResult criterion_band_point() {
    Timer timer;
    CriterionResult r{5, "reference band point"};
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    auto cell0 = UnitCellSpec::uniform(site, 0, 0.01, -0.5);
    const double particle = diagonalize(build_block(cell0, Sector::particle, 0, 0.0))(0);
    auto cell1 = UnitCellSpec::uniform(site, 1, 0.01, -0.5);
    const double hole = diagonalize(build_block(cell1, Sector::hole, 0, 0.0))(0);

    const double dev_p = std::abs(particle - (-0.51005));
    const double dev_h = std::abs(hole - 0.49);
    r.seconds = timer.seconds();
    r.pass = dev_p <= 1e-6 && dev_h <= 1e-6;
    r.detail = "E_p(0,0) = " + fmt(particle) + ", E_h(1,0) = " + fmt(hole) + " beta";
    return r;
}

// ---------------------------------------------------------------------------
// 6. mean-field structure: anchoring, distinct lobe tip, z kappa scaling
CriterionResult criterion_meanfield(int threads) {
    Timer timer;
    CriterionResult r{6, "mean-field boundary structure"};
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);

    const auto edges = mf_boundary(site, 2, {-1.0, 1.0 - std::sqrt(2.0)}, 25, threads);
    const double anchor = std::max(edges[0].kappa_c, edges[1].kappa_c);

    const auto curve = mf_boundary(site, 2, linspace(-0.98, -0.43, 23), 25, threads);
    double mf_tip = 0.0;
    bool all_found = true;
    for (const auto& pt : curve) {
        all_found = all_found && pt.transition_found;
        mf_tip = std::max(mf_tip, pt.kappa_c);
    }
    const double op_tip = lobe_tip({site}, {1});

    MfProblem a;
    a.site = site;
    a.kappa = 0.05;
    a.mu = -0.6;
    a.z = 2;
    auto b = a;
    b.kappa = 0.10;
    b.z = 1;
    const double scaling_dev =
        std::abs(mf_order_parameter(a).psi_star - mf_order_parameter(b).psi_star);

    r.seconds = timer.seconds();
    r.pass = anchor <= 1e-4 && all_found && std::abs(mf_tip - op_tip) > 1e-3 &&
             mf_tip < op_tip && scaling_dev <= 1e-10;
    r.detail = "kappa_c(edges) <= " + fmt(anchor) + ", MF tip = " + fmt(mf_tip) +
               " vs one-polariton tip = " + fmt(op_tip) +
               ", z-scaling dev = " + fmt(scaling_dev);
    return r;
}

// ---------------------------------------------------------------------------
// 7. finite-cavity plateaux approach the one-polariton lobe monotonically
CriterionResult criterion_finite_cavity() {
    Timer timer;
    CriterionResult r{7, "finite-cavity plateau trend"};
    const auto site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    const double kappa = 0.02;

    const auto window = lobe_boundary({site}, {1}, kappa);
    std::ostringstream detail;
    bool upper_monotone = true, lower_monotone = true;
    double prev_u = std::numeric_limits<double>::infinity();
    double prev_l = std::numeric_limits<double>::infinity();
    for (int m = 2; m <= 5; ++m) {
        const auto plateau = plateau_boundaries(m, site, Boundary::open, {kappa}, 1)[0];
        const double du = std::abs(plateau.mu_upper - window.mu_upper);
        const double dl = std::abs(plateau.mu_lower - window.mu_lower);
        upper_monotone = upper_monotone && du < prev_u;
        lower_monotone = lower_monotone && dl < prev_l;
        prev_u = du;
        prev_l = dl;
        detail << "M=" << m << ":[" << fmt(plateau.mu_lower) << "," << fmt(plateau.mu_upper)
               << "] ";
    }
    detail << "1P:[" << fmt(window.mu_lower) << "," << fmt(window.mu_upper) << "]";
    r.seconds = timer.seconds();
    r.pass = upper_monotone && lower_monotone && r.seconds < 120.0;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 8. doped Mott set = tuned ∩ detuned at small hopping, with doubled lobe count
CriterionResult criterion_doped_intersection(int threads) {
    Timer timer;
    CriterionResult r{8, "doped lobes are the tuned/detuned intersection"};
    const auto tuned_site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    const auto detuned_site = SiteParams::from_detuning(0.0, 1.0, 1.0);

    // Scan across the lobe-0 junctions: at kappa = 1e-3 the doped boundaries
    // lag the uniform ones by second-order corrections, which stay inside the
    // mu tolerance here; around the lobe-1/2 junctions the uniform first-order
    // boundary motion (~3e-3 beta) already exceeds it.
    const std::vector<double> kappa_axis{1e-3};
    const auto mu_axis = linspace(-1.9, -1.05, 1701);
    const GapMapOptions opts{65, 20, threads};
    const auto tuned = gap_map({tuned_site}, kappa_axis, mu_axis, opts);
    const auto detuned = gap_map({detuned_site}, kappa_axis, mu_axis, opts);
    const auto doped = gap_map({tuned_site, detuned_site}, kappa_axis, mu_axis, opts);

    const auto report = intersection_check(tuned, detuned, doped, 1e-3, 1e-3);
    const int tuned_lobes = count_lobes(tuned, 0);
    const int doped_lobes = count_lobes(doped, 0);

    r.seconds = timer.seconds();
    r.pass = report.equal && tuned_lobes >= 1 && doped_lobes == 2 * tuned_lobes;
    r.detail = "max deviation = " + fmt(report.max_deviation) + " beta; lobes doped/tuned = " +
               std::to_string(doped_lobes) + "/" + std::to_string(tuned_lobes);
    return r;
}

// ---------------------------------------------------------------------------
// 9. semiconductor analogs: n-type, p-type, and the gap-enhancement anomaly
CriterionResult criterion_semiconductor(int threads) {
    Timer timer;
    CriterionResult r{9, "semiconductor analogs and gap anomaly"};
    const auto tuned_site = SiteParams::from_detuning(0.0, 0.0, 1.0);
    const auto detuned_site = SiteParams::from_detuning(0.0, 1.0, 1.0);
    const std::vector<SiteParams> pair{tuned_site, detuned_site};

    // n/p classification across the doped lobes at small hopping
    const std::vector<double> kappa_axis{0.01};
    const auto mu_axis = linspace(-1.55, -0.36, 477);
    const GapMapOptions opts{65, 20, threads};
    const auto doped = gap_map(pair, kappa_axis, mu_axis, opts);
    int n_type = 0, p_type = 0;
    for (int j = 0; j < int(mu_axis.size()); ++j) {
        if (!doped.is_mott(0, j)) continue;
        if (doped.raw_particle(0, j) < doped.raw_hole(0, j)) ++n_type;
        if (doped.raw_hole(0, j) < doped.raw_particle(0, j)) ++p_type;
    }

    // anomaly search: doped gap above both uniform gaps
    const auto kappa_search = linspace(0.004, 0.03, 27);
    const auto mu_search = linspace(-0.45, -0.36, 181);
    const auto t_map = gap_map({tuned_site}, kappa_search, mu_search, opts);
    const auto d_map = gap_map({detuned_site}, kappa_search, mu_search, opts);
    const auto x_map = gap_map(pair, kappa_search, mu_search, opts);
    int anomalies = 0;
    double best_margin = 0.0, best_kappa = 0.0, best_mu = 0.0;
    for (int i = 0; i < int(kappa_search.size()); ++i)
        for (int j = 0; j < int(mu_search.size()); ++j) {
            const double margin =
                x_map.gap(i, j) - std::max(t_map.gap(i, j), d_map.gap(i, j));
            if (x_map.is_mott(i, j) && margin > x_map.mott_threshold()) {
                ++anomalies;
                if (margin > best_margin) {
                    best_margin = margin;
                    best_kappa = kappa_search[i];
                    best_mu = mu_search[j];
                }
            }
        }

    // frozen regression points from the original searches
    auto doped_gaps_at = [&](double kappa, double mu) {
        UnitCellSpec cell{pair, doped_background(pair, mu), kappa, mu};
        return excitation_gaps(cell, 65);
    };
    const auto at_n = doped_gaps_at(0.01, -0.45);   // polariton-type minimal excitation
    const auto at_p = doped_gaps_at(0.01, -0.95);   // hole-type minimal excitation
    const bool frozen_np = at_n.min() > 0 && at_n.particle < at_n.hole &&
                           at_p.min() > 0 && at_p.hole < at_p.particle;

    const double frozen_kappa = 0.008, frozen_mu = -0.403;
    const double frozen_doped = std::max(0.0, doped_gaps_at(frozen_kappa, frozen_mu).min());
    auto uniform_gap = [&](const SiteParams& s) {
        UnitCellSpec cell{{s}, doped_background({s}, frozen_mu), frozen_kappa, frozen_mu};
        return std::max(0.0, excitation_gaps(cell, 65).min());
    };
    const bool frozen_ok =
        frozen_np &&
        frozen_doped > std::max(uniform_gap(tuned_site), uniform_gap(detuned_site));

    r.seconds = timer.seconds();
    r.pass = n_type >= 1 && p_type >= 1 && anomalies >= 1 && frozen_ok;
    r.detail = "n-type points = " + std::to_string(n_type) +
               ", p-type = " + std::to_string(p_type) +
               ", anomalies = " + std::to_string(anomalies) + ", best at (kappa=" +
               fmt(best_kappa) + ", mu=" + fmt(best_mu) + ", margin=" + fmt(best_margin) +
               ")";
    return r;
}

// ---------------------------------------------------------------------------
// 10. byte-identical CLI reruns and gauge-shift invariance
CriterionResult criterion_determinism(int threads) {
    Timer timer;
    CriterionResult r{10, "determinism and gauge invariance"};

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    auto read_file = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };

    bool identical = true;
    for (const char* command : {"band", "phase"}) {
        cli::RunConfig cfg;
        cfg.command = command;
        cfg.kappa = 0.01;
        cfg.mu_minus_omega = -0.5;
        cfg.k_points = 31;
        cfg.kappa_points = 5;
        cfg.mu_points = 17;
        cfg.gap_k_points = 33;
        cfg.threads = threads;
        const fs::path out = dir / (std::string("jch_accept_") + command + ".csv");
        cfg.output = out.string();
        cli::run(cfg);
        const std::string first = read_file(out);
        cli::run(cfg);
        const std::string second = read_file(out);
        fs::remove(out);
        identical = identical && !first.empty() && first == second;
    }

    // one gauge-shift probe per module
    const double c = 0.37;
    double max_dev = 0.0;
    const auto site = SiteParams::from_detuning(0.0, 0.5, 1.0);
    const auto shifted = SiteParams{site.omega + c, site.epsilon + c, site.beta};

    auto cell = UnitCellSpec::uniform(site, 1, 0.03, -0.45);
    auto cell_shift = UnitCellSpec::uniform(shifted, 1, 0.03, -0.45 + c);
    const auto band_a = diagonalize(build_block(cell, Sector::particle, 0, 0.6));
    const auto band_b = diagonalize(build_block(cell_shift, Sector::particle, 0, 0.6));
    max_dev = std::max(max_dev, (band_a - band_b).cwiseAbs().maxCoeff());

    max_dev = std::max(
        max_dev, std::abs(double(atomic_limit_filling(site, -0.45) -
                                 atomic_limit_filling(shifted, -0.45 + c))));

    const auto gaps_a = excitation_gaps(cell);
    const auto gaps_b = excitation_gaps(cell_shift);
    max_dev = std::max({max_dev, std::abs(gaps_a.particle - gaps_b.particle),
                        std::abs(gaps_a.hole - gaps_b.hole)});

    MfProblem mp;
    mp.site = site;
    mp.kappa = 0.05;
    mp.mu = -0.45;
    auto mp_shift = mp;
    mp_shift.site = shifted;
    mp_shift.mu = -0.45 + c;
    max_dev = std::max(max_dev, std::abs(mf_order_parameter(mp).psi_star -
                                         mf_order_parameter(mp_shift).psi_star));

    const double ed_a = ground_energy(3, 2, site, 0.04, Boundary::ring);
    const double ed_b = ground_energy(3, 2, shifted, 0.04, Boundary::ring);
    max_dev = std::max(max_dev, std::abs(ed_b - ed_a - 2.0 * c));

    r.seconds = timer.seconds();
    r.pass = identical && max_dev <= 1e-10;
    r.detail = std::string("reruns ") + (identical ? "byte-identical" : "DIFFER") +
               ", gauge dev = " + fmt(max_dev);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_all(int threads) {
    std::vector<CriterionResult> results;
    results.push_back(criterion_equivalence());
    results.push_back(criterion_atomic_lobes());
    results.push_back(criterion_ring_oracle());
    results.push_back(criterion_error_scaling());
    results.push_back(criterion_band_point());
    results.push_back(criterion_meanfield(threads));
    results.push_back(criterion_finite_cavity());
    results.push_back(criterion_doped_intersection(threads));
    results.push_back(criterion_semiconductor(threads));
    results.push_back(criterion_determinism(threads));
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& c) { return c.pass; });
}

void print_table(std::ostream& out, const std::vector<CriterionResult>& results) {
    for (const auto& c : results) {
        char line[64];
        std::snprintf(line, sizeof line, "[%s] %2d %-42s", c.pass ? "PASS" : "FAIL", c.id,
                      c.name.c_str());
        out << line << " | " << c.detail << " (" << fmt(c.seconds) << " s)\n";
    }
    int passed = 0;
    for (const auto& c : results) passed += c.pass;
    out << passed << "/" << results.size() << " criteria passed\n";
}

}  // namespace jch::accept

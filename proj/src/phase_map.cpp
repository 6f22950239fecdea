#include "jch/phase_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "jch/parallel.hpp"

namespace jch {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double band_minimum(const UnitCellSpec& cell, Sector sector, int k_count) {
    const auto band = sample_band(cell, sector, k_count);
    return band.energies.col(0).minCoeff();
}

bool has_hole_states(const std::vector<int>& fillings) {
    return std::any_of(fillings.begin(), fillings.end(), [](int n) { return n > 0; });
}

// Positions where the indicator [raw > thr] flips, refined by linear
// interpolation of the signed gap between the bracketing grid points.
std::vector<double> indicator_flips(const std::vector<double>& mu,
                                    const std::vector<double>& raw, double thr) {
    std::vector<double> flips;
    for (std::size_t j = 0; j + 1 < mu.size(); ++j) {
        const bool a = raw[j] > thr, b = raw[j + 1] > thr;
        if (a == b) continue;
        double pos = 0.5 * (mu[j] + mu[j + 1]);
        if (std::isfinite(raw[j]) && std::isfinite(raw[j + 1]) && raw[j] != raw[j + 1])
            pos = mu[j] + (thr - raw[j]) * (mu[j + 1] - mu[j]) / (raw[j + 1] - raw[j]);
        flips.push_back(pos);
    }
    return flips;
}

}  // namespace

GapPair excitation_gaps(const UnitCellSpec& cell, int k_count) {
    cell.validate();
    GapPair gaps;
    gaps.particle = band_minimum(cell, Sector::particle, k_count);
    gaps.hole = has_hole_states(cell.fillings)
                    ? band_minimum(cell, Sector::hole, k_count)
                    : inf;
    return gaps;
}

LobeWindow lobe_boundary(const std::vector<SiteParams>& sites,
                         const std::vector<int>& fillings, double kappa, int k_count) {
    UnitCellSpec cell{sites, fillings, kappa, 0.0};
    const auto gaps = excitation_gaps(cell, k_count);
    LobeWindow window;
    window.mu_upper = gaps.particle;
    window.mu_lower = std::isfinite(gaps.hole) ? -gaps.hole : -inf;
    return window;
}

LobeBoundary lobe_boundary_curve(const std::vector<SiteParams>& sites,
                                 const std::vector<int>& fillings,
                                 const std::vector<double>& kappa_grid, int k_count) {
    LobeBoundary curve;
    curve.fillings = fillings;
    curve.kappa_grid = kappa_grid;
    curve.mu_upper.resize(kappa_grid.size());
    curve.mu_lower.resize(kappa_grid.size());
    for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
        const auto window = lobe_boundary(sites, fillings, kappa_grid[i], k_count);
        curve.mu_upper[i] = window.mu_upper;
        curve.mu_lower[i] = window.mu_lower;
    }
    return curve;
}

double lobe_tip(const std::vector<SiteParams>& sites, const std::vector<int>& fillings,
                int k_count, double rel_tol) {
    const double beta_ref = sites.at(0).beta;
    auto width = [&](double kappa) {
        return lobe_boundary(sites, fillings, kappa, k_count).width();
    };
    if (!(width(0.0) > 0.0))
        throw std::invalid_argument("lobe_tip: lobe is closed at kappa = 0");

    double hi = 0.05 * beta_ref;
    while (width(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 100.0 * beta_ref) {
            std::ostringstream msg;
            msg << "lobe_tip: no closure found; last bracket [0, " << hi << "]";
            throw std::runtime_error(msg.str());
        }
    }
    // monotone-decrease assertion over the bracket
    double prev = width(0.0);
    for (int i = 1; i <= 8; ++i) {
        const double w = width(hi * i / 8.0);
        if (w > prev + 1e-12 * beta_ref) {
            std::ostringstream msg;
            msg << "lobe_tip: width not monotone on [0, " << hi << "] near kappa = "
                << hi * i / 8.0;
            throw std::runtime_error(msg.str());
        }
        prev = w;
    }

    double lo = 0.0;
    while (hi - lo > rel_tol * hi)
        if (const double mid = 0.5 * (lo + hi); width(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    return 0.5 * (lo + hi);
}

std::vector<int> doped_background(const std::vector<SiteParams>& sites, double mu,
                                  int n_max) {
    std::vector<int> fillings;
    fillings.reserve(sites.size());
    for (const auto& site : sites) fillings.push_back(atomic_limit_filling(site, mu, n_max));
    return fillings;
}

std::string PhaseGrid::label(int i, int j) const {
    if (pattern(i, j) < 0) return "ERR";
    if (!is_mott(i, j)) return "SF";
    const auto& p = patterns[pattern(i, j)];
    std::string out;
    for (std::size_t r = 0; r < p.size(); ++r) {
        if (r) out += '|';
        out += std::to_string(p[r]);
    }
    return out;
}

PhaseGrid gap_map(const std::vector<SiteParams>& sites,
                  const std::vector<double>& kappa_axis,
                  const std::vector<double>& mu_axis, const GapMapOptions& opts) {
    if (sites.empty()) throw std::invalid_argument("gap_map: no sites");
    for (std::size_t i = 0; i + 1 < kappa_axis.size(); ++i)
        if (!(kappa_axis[i] < kappa_axis[i + 1]))
            throw std::invalid_argument("gap_map: kappa axis must be strictly increasing");
    for (std::size_t j = 0; j + 1 < mu_axis.size(); ++j)
        if (!(mu_axis[j] < mu_axis[j + 1]))
            throw std::invalid_argument("gap_map: mu axis must be strictly increasing");

    const int nk = int(kappa_axis.size()), nm = int(mu_axis.size());
    PhaseGrid grid;
    grid.kappa_axis = kappa_axis;
    grid.mu_axis = mu_axis;
    grid.beta_ref = sites[0].beta;
    grid.gap.setZero(nk, nm);
    grid.raw_gap.setZero(nk, nm);
    grid.raw_particle.setZero(nk, nm);
    grid.raw_hole.setZero(nk, nm);
    grid.pattern.setConstant(nk, nm, -2);

    // Backgrounds depend on mu only; resolve the per-column patterns first.
    std::vector<int> column_pattern(nm, -2);
    std::map<std::vector<int>, int> ids;
    std::mutex err_mutex;
    for (int j = 0; j < nm; ++j) {
        try {
            auto fillings = doped_background(sites, mu_axis[j], opts.n_max);
            auto [it, inserted] = ids.emplace(fillings, int(grid.patterns.size()));
            if (inserted) grid.patterns.push_back(fillings);
            column_pattern[j] = it->second;
        } catch (const std::exception& e) {
            if (grid.point_errors.size() < 16) grid.point_errors.emplace_back(e.what());
        }
    }

    parallel_for(std::size_t(nk) * nm, opts.threads, [&](std::size_t idx) {
        const int i = int(idx / nm), j = int(idx % nm);
        if (column_pattern[j] < 0) return;
        try {
            UnitCellSpec cell{sites, grid.patterns[column_pattern[j]], kappa_axis[i],
                              mu_axis[j]};
            const auto gaps = excitation_gaps(cell, opts.k_count);
            grid.raw_particle(i, j) = gaps.particle;
            grid.raw_hole(i, j) = gaps.hole;
            grid.raw_gap(i, j) = gaps.min();
            // clip through the Mott threshold so gap = 0 exactly on SF points
            grid.gap(i, j) = gaps.min() > grid.mott_threshold() ? gaps.min() : 0.0;
            grid.pattern(i, j) = column_pattern[j];
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (grid.point_errors.size() < 16) grid.point_errors.emplace_back(e.what());
        }
    });
    return grid;
}

IntersectionReport intersection_check(const PhaseGrid& tuned, const PhaseGrid& detuned,
                                      const PhaseGrid& doped, double kappa_max,
                                      double mu_tol) {
    for (const PhaseGrid* g : {&detuned, &doped}) {
        if (g->kappa_axis != tuned.kappa_axis || g->mu_axis != tuned.mu_axis)
            throw std::invalid_argument("intersection_check: maps must share axes");
    }
    const double thr = doped.mott_threshold();
    const int nm = int(tuned.mu_axis.size());

    IntersectionReport report;
    report.equal = true;
    for (std::size_t i = 0; i < tuned.kappa_axis.size(); ++i) {
        if (tuned.kappa_axis[i] > kappa_max) continue;
        ++report.columns_checked;

        std::vector<double> expected_raw(nm), actual_raw(nm);
        for (int j = 0; j < nm; ++j) {
            expected_raw[j] = std::min(tuned.raw_gap(int(i), j), detuned.raw_gap(int(i), j));
            actual_raw[j] = doped.raw_gap(int(i), j);
        }
        auto boundaries = indicator_flips(tuned.mu_axis, expected_raw, thr);
        const auto actual_flips = indicator_flips(tuned.mu_axis, actual_raw, thr);
        boundaries.insert(boundaries.end(), actual_flips.begin(), actual_flips.end());

        // disagreement is tolerated only inside the mu_tol collar of a boundary
        for (int j = 0; j < nm; ++j) {
            const bool e = expected_raw[j] > thr, a = actual_raw[j] > thr;
            if (e == a) continue;
            double dist = inf;
            for (double b : boundaries) dist = std::min(dist, std::abs(tuned.mu_axis[j] - b));
            report.max_deviation = std::max(report.max_deviation, dist);
            if (dist > mu_tol) report.equal = false;
        }
    }
    if (report.columns_checked == 0)
        throw std::invalid_argument("intersection_check: no kappa column <= kappa_max");
    return report;
}

}  // namespace jch

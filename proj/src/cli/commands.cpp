#include <json.hpp>

#include <cmath>
#include <iostream>

#include "jch/cli/acceptance.hpp"
#include "jch/cli/config.hpp"
#include "jch/cli/csv.hpp"
#include "jch/exact_diag.hpp"
#include "jch/meanfield.hpp"
#include "jch/phase_map.hpp"
#include "jch/version.hpp"

namespace jch::cli {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}

void write_preamble(CsvWriter& csv, const RunConfig& cfg) {
    csv.comment(std::string(artifact_name) + " " + artifact_version);
    for (const auto& [key, value] : cfg.resolved()) csv.comment(key + " = " + value);
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    for (const auto& [key, value] : cfg.resolved()) j[key] = value;
    return j;
}

void write_summary(const RunConfig& cfg, nlohmann::ordered_json results) {
    if (cfg.summary.empty()) return;
    nlohmann::ordered_json j;
    j["artifact"] = artifact_name;
    j["version"] = artifact_version;
    j["config"] = config_json(cfg);
    j["results"] = std::move(results);
    std::ofstream out(cfg.summary, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open summary file: " + cfg.summary);
    out << j.dump(2) << "\n";
}

double omega_abs(const RunConfig& cfg) { return cfg.omega * cfg.beta; }

std::vector<SiteParams> make_sites(const RunConfig& cfg, bool doped_pair) {
    const double w = omega_abs(cfg);
    if (doped_pair)
        return {SiteParams::from_detuning(w, cfg.delta0 * cfg.beta, cfg.beta),
                SiteParams::from_detuning(w, cfg.delta1 * cfg.beta, cfg.beta)};
    return {SiteParams::from_detuning(w, cfg.delta * cfg.beta, cfg.beta)};
}

UnitCellSpec make_cell(const RunConfig& cfg) {
    UnitCellSpec cell;
    cell.sites = make_sites(cfg, cfg.cell == "doped");
    cell.kappa = cfg.kappa * cfg.beta;
    cell.mu = omega_abs(cfg) + cfg.mu_minus_omega * cfg.beta;
    if (cfg.filling >= 0)
        cell.fillings.assign(cell.sites.size(), cfg.filling);
    else
        cell.fillings = doped_background(cell.sites, cell.mu, cfg.n_max);
    return cell;
}

int run_band(const RunConfig& cfg) {
    const auto cell = make_cell(cfg);
    const auto sector = cfg.sector == "hole" ? Sector::hole : Sector::particle;
    const auto band = sample_band(cell, sector, cfg.k_points);

    CsvWriter csv(cfg.output);
    write_preamble(csv, cfg);
    csv.header({"k", "branch_index", "energy_over_beta"});
    for (std::size_t i = 0; i < band.k_grid.size(); ++i)
        for (int b = 0; b < band.energies.cols(); ++b)
            csv.row({format_number(band.k_grid[i]), std::to_string(b),
                     format_number(band.energies(int(i), b) / cfg.beta)});
    csv.close();

    nlohmann::ordered_json results;
    results["branches"] = band.energies.cols();
    results["rows"] = band.k_grid.size() * band.energies.cols();
    results["min_energy_over_beta"] = band.energies.minCoeff() / cfg.beta;
    write_summary(cfg, results);
    return exit_ok;
}

int run_phase(const RunConfig& cfg) {
    const auto sites = make_sites(cfg, cfg.cell == "doped");
    const auto kappa_axis = linspace(cfg.kappa_min * cfg.beta, cfg.kappa_max * cfg.beta,
                                     cfg.kappa_points);
    const auto mu_axis = linspace(omega_abs(cfg) + cfg.mu_min * cfg.beta,
                                  omega_abs(cfg) + cfg.mu_max * cfg.beta, cfg.mu_points);
    const GapMapOptions opts{cfg.gap_k_points, cfg.n_max, cfg.threads};
    const auto grid = gap_map(sites, kappa_axis, mu_axis, opts);

    CsvWriter csv(cfg.output);
    write_preamble(csv, cfg);
    csv.header({"kappa_over_beta", "mu_minus_omega_over_beta", "gap_over_beta", "label"});
    for (int i = 0; i < int(kappa_axis.size()); ++i)
        for (int j = 0; j < int(mu_axis.size()); ++j)
            csv.row({format_number(kappa_axis[i] / cfg.beta),
                     format_number((mu_axis[j] - omega_abs(cfg)) / cfg.beta),
                     format_number(grid.gap(i, j) / cfg.beta), grid.label(i, j)});
    csv.close();

    nlohmann::ordered_json results;
    results["grid_points"] = kappa_axis.size() * mu_axis.size();
    results["patterns"] = grid.patterns.size();
    results["point_errors"] = grid.point_errors;
    results["max_gap_over_beta"] = grid.gap.maxCoeff() / cfg.beta;
    write_summary(cfg, results);
    return exit_ok;
}

int run_doped(const RunConfig& cfg) {
    const auto kappa_axis = linspace(cfg.kappa_min * cfg.beta, cfg.kappa_max * cfg.beta,
                                     cfg.kappa_points);
    const auto mu_axis = linspace(omega_abs(cfg) + cfg.mu_min * cfg.beta,
                                  omega_abs(cfg) + cfg.mu_max * cfg.beta, cfg.mu_points);
    const GapMapOptions opts{cfg.gap_k_points, cfg.n_max, cfg.threads};

    const auto tuned = gap_map(make_sites(cfg, false), kappa_axis, mu_axis, opts);
    RunConfig detuned_cfg = cfg;
    detuned_cfg.delta = cfg.delta1;
    const auto detuned = gap_map(make_sites(detuned_cfg, false), kappa_axis, mu_axis, opts);
    const auto doped = gap_map(make_sites(cfg, true), kappa_axis, mu_axis, opts);

    CsvWriter csv(cfg.output);
    write_preamble(csv, cfg);
    csv.header({"kappa_over_beta", "mu_minus_omega_over_beta", "gap_doped_over_beta",
                "gap_tuned_over_beta", "gap_detuned_over_beta", "label_doped"});
    for (int i = 0; i < int(kappa_axis.size()); ++i)
        for (int j = 0; j < int(mu_axis.size()); ++j)
            csv.row({format_number(kappa_axis[i] / cfg.beta),
                     format_number((mu_axis[j] - omega_abs(cfg)) / cfg.beta),
                     format_number(doped.gap(i, j) / cfg.beta),
                     format_number(tuned.gap(i, j) / cfg.beta),
                     format_number(detuned.gap(i, j) / cfg.beta), doped.label(i, j)});
    csv.close();

    nlohmann::ordered_json results;
    results["grid_points"] = kappa_axis.size() * mu_axis.size();
    results["doped_patterns"] = doped.patterns.size();
    write_summary(cfg, results);
    return exit_ok;
}

int run_mf(const RunConfig& cfg) {
    const auto site = make_sites(cfg, false)[0];
    const auto mu_axis = linspace(omega_abs(cfg) + cfg.mu_min * cfg.beta,
                                  omega_abs(cfg) + cfg.mu_max * cfg.beta, cfg.mu_points);
    const auto curve = mf_boundary(site, cfg.z, mu_axis, cfg.mf_n_max, cfg.threads);

    CsvWriter csv(cfg.output);
    write_preamble(csv, cfg);
    csv.header({"mu_minus_omega_over_beta", "kappa_c_over_beta", "transition_found"});
    for (const auto& pt : curve)
        csv.row({format_number((pt.mu - omega_abs(cfg)) / cfg.beta),
                 format_number(pt.kappa_c / cfg.beta), pt.transition_found ? "1" : "0"});
    csv.close();

    double tip = 0.0;
    for (const auto& pt : curve)
        if (pt.transition_found && std::isfinite(pt.kappa_c)) tip = std::max(tip, pt.kappa_c);
    nlohmann::ordered_json results;
    results["points"] = curve.size();
    results["max_kappa_c_over_beta"] = tip / cfg.beta;
    write_summary(cfg, results);
    return exit_ok;
}

int run_ed(const RunConfig& cfg) {
    const auto site = make_sites(cfg, false)[0];
    const auto bc = cfg.bc == "open" ? Boundary::open : Boundary::ring;

    CsvWriter csv(cfg.output);
    write_preamble(csv, cfg);
    nlohmann::ordered_json results;

    if (cfg.ed_mode == "rho") {
        const int n_top = cfg.target * cfg.cavities + 2;
        const auto spectrum =
            sector_ground_energies(cfg.cavities, site, cfg.kappa * cfg.beta, bc, n_top);
        const auto mu_axis = linspace(omega_abs(cfg) + cfg.mu_min * cfg.beta,
                                      omega_abs(cfg) + cfg.mu_max * cfg.beta,
                                      cfg.mu_points);
        const auto curve = mean_excitation_curve(spectrum, mu_axis);
        csv.header({"mu_minus_omega_over_beta", "n_star", "rho", "truncated"});
        for (const auto& pt : curve)
            csv.row({format_number((pt.mu - omega_abs(cfg)) / cfg.beta),
                     std::to_string(pt.n_star), format_number(pt.rho),
                     pt.truncated ? "1" : "0"});
        results["sectors"] = spectrum.e0.size();
    } else {
        const auto kappa_axis = linspace(cfg.kappa_min * cfg.beta,
                                         cfg.kappa_max * cfg.beta, cfg.kappa_points);
        const auto windows =
            plateau_boundaries(cfg.cavities, site, bc, kappa_axis, cfg.target, cfg.threads);
        csv.header({"kappa_over_beta", "mu_lower_minus_omega_over_beta",
                    "mu_upper_minus_omega_over_beta", "absent"});
        for (const auto& w : windows)
            csv.row({format_number(w.kappa / cfg.beta),
                     format_number((w.mu_lower - omega_abs(cfg)) / cfg.beta),
                     format_number((w.mu_upper - omega_abs(cfg)) / cfg.beta),
                     w.absent ? "1" : "0"});
        results["points"] = windows.size();
    }
    csv.close();
    write_summary(cfg, results);
    return exit_ok;
}

int run_verify(const RunConfig& cfg) {
    const auto report = accept::run_all(cfg.threads);
    accept::print_table(std::cout, report);

    CsvWriter csv(cfg.output);
    write_preamble(csv, cfg);
    csv.header({"id", "name", "pass", "detail"});
    for (const auto& c : report)
        csv.row({std::to_string(c.id), c.name, c.pass ? "1" : "0", c.detail});
    csv.close();

    nlohmann::ordered_json results;
    results["criteria"] = report.size();
    results["passed"] = accept::all_passed(report);
    write_summary(cfg, results);
    return accept::all_passed(report) ? exit_ok : exit_verification_failure;
}

}  // namespace

int run(const RunConfig& cfg) {
    if (cfg.command == "band") return run_band(cfg);
    if (cfg.command == "phase") return run_phase(cfg);
    if (cfg.command == "doped") return run_doped(cfg);
    if (cfg.command == "mf") return run_mf(cfg);
    if (cfg.command == "ed") return run_ed(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    throw ConfigError("unknown command: " + cfg.command);
}

}  // namespace jch::cli

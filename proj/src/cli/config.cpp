#include "jch/cli/config.hpp"

#include <CLI11.hpp>

#include "jch/cli/csv.hpp"

namespace jch::cli {

namespace {

void register_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--command", cfg.command,
                   "band | phase | mf | ed | doped | verify")
        ->required()
        ->check(CLI::IsMember({"band", "phase", "mf", "ed", "doped", "verify"}));

    app.add_option("--beta", cfg.beta, "atom-photon coupling, the energy unit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--omega", cfg.omega,
                   "cavity resonance / beta; every output is relative to it")
        ->capture_default_str();
    app.add_option("--delta", cfg.delta, "uniform detuning / beta")->capture_default_str();
    app.add_option("--delta0", cfg.delta0, "doped sublattice-0 detuning / beta")
        ->capture_default_str();
    app.add_option("--delta1", cfg.delta1, "doped sublattice-1 detuning / beta")
        ->capture_default_str();
    app.add_option("--kappa", cfg.kappa, "hopping rate / beta")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--mu_minus_omega", cfg.mu_minus_omega, "(mu - omega) / beta")
        ->capture_default_str();

    app.add_option("--cell", cfg.cell, "band/phase cell: uniform | doped")
        ->capture_default_str()
        ->check(CLI::IsMember({"uniform", "doped"}));
    app.add_option("--filling", cfg.filling,
                   "background excitations per site; -1 = atomic-limit rule")
        ->capture_default_str()
        ->check(CLI::Range(-1, 30));
    app.add_option("--sector", cfg.sector, "particle | hole")
        ->capture_default_str()
        ->check(CLI::IsMember({"particle", "hole"}));
    app.add_option("--k_points", cfg.k_points, "momentum grid size for band output")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));
    app.add_option("--gap_k_points", cfg.gap_k_points, "momentum grid size for gap minima")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));

    app.add_option("--kappa_min", cfg.kappa_min, "sweep start, kappa / beta")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--kappa_max", cfg.kappa_max, "sweep end, kappa / beta")
        ->capture_default_str();
    app.add_option("--kappa_points", cfg.kappa_points, "sweep size in kappa")
        ->capture_default_str()
        ->check(CLI::Range(1, 100000));
    app.add_option("--mu_min", cfg.mu_min, "sweep start, (mu - omega) / beta")
        ->capture_default_str();
    app.add_option("--mu_max", cfg.mu_max, "sweep end, (mu - omega) / beta")
        ->capture_default_str();
    app.add_option("--mu_points", cfg.mu_points, "sweep size in mu")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000000));

    app.add_option("--n_max", cfg.n_max, "atomic-limit filling scan cap")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000));
    app.add_option("--mf_n_max", cfg.mf_n_max, "mean-field photon truncation")
        ->capture_default_str()
        ->check(CLI::Range(2, 500));
    app.add_option("--z", cfg.z, "mean-field coordination number")
        ->capture_default_str()
        ->check(CLI::Range(1, 100));

    app.add_option("--cavities", cfg.cavities, "cavity count for exact diagonalization")
        ->capture_default_str()
        ->check(CLI::Range(2, 10));
    app.add_option("--bc", cfg.bc, "boundary conditions: ring | open")
        ->capture_default_str()
        ->check(CLI::IsMember({"ring", "open"}));
    app.add_option("--target", cfg.target, "plateau mean excitation")
        ->capture_default_str()
        ->check(CLI::Range(1, 4));
    app.add_option("--ed_mode", cfg.ed_mode, "ed output: plateau | rho")
        ->capture_default_str()
        ->check(CLI::IsMember({"plateau", "rho"}));

    app.add_option("--threads", cfg.threads, "worker pool size; 0 = machine parallelism")
        ->capture_default_str()
        ->check(CLI::Range(0, 1024));
    app.add_option("--output", cfg.output, "CSV output path")->capture_default_str();
    app.add_option("--summary", cfg.summary, "optional JSON summary path")
        ->capture_default_str();

    app.set_config("--config", "", "key = value file; '#' comments; flags override");
    app.allow_config_extras(false);
}

void validate_ranges(const RunConfig& cfg) {
    if (!(cfg.kappa_min < cfg.kappa_max) && cfg.kappa_points > 1)
        throw ConfigError("kappa range must be strictly increasing (kappa_min < kappa_max)");
    if (!(cfg.mu_min < cfg.mu_max) && cfg.mu_points > 1)
        throw ConfigError("mu range must be strictly increasing (mu_min < mu_max)");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    auto num = [](double v) { return format_number(v); };
    return {
        {"command", command},
        {"beta", num(beta)},
        {"omega", num(omega)},
        {"delta", num(delta)},
        {"delta0", num(delta0)},
        {"delta1", num(delta1)},
        {"kappa", num(kappa)},
        {"mu_minus_omega", num(mu_minus_omega)},
        {"cell", cell},
        {"filling", std::to_string(filling)},
        {"sector", sector},
        {"k_points", std::to_string(k_points)},
        {"gap_k_points", std::to_string(gap_k_points)},
        {"kappa_min", num(kappa_min)},
        {"kappa_max", num(kappa_max)},
        {"kappa_points", std::to_string(kappa_points)},
        {"mu_min", num(mu_min)},
        {"mu_max", num(mu_max)},
        {"mu_points", std::to_string(mu_points)},
        {"n_max", std::to_string(n_max)},
        {"mf_n_max", std::to_string(mf_n_max)},
        {"z", std::to_string(z)},
        {"cavities", std::to_string(cavities)},
        {"bc", bc},
        {"target", std::to_string(target)},
        {"ed_mode", ed_mode},
        {"threads", std::to_string(threads)},
        {"output", output},
        {"summary", summary},
    };
}

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"one-dimensional coupled-cavity lattice simulator"};
    register_options(app, cfg);

    std::vector<const char*> argv{"jch-sim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    validate_ranges(cfg);
    return cfg;
}

}  // namespace jch::cli

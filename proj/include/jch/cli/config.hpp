// config.hpp — run configuration: key = value files and mirrored flags
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jch::cli {

// Exit codes of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_error = 3,
    exit_verification_failure = 4,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown on --help; carries the help text, exits 0
struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All energies are taken in units of beta; mu is specified as (mu - omega)/beta
// and every output reports energies the same way. Defaults are documented in
// --help next to each key.
struct RunConfig {
    std::string command;  // band | phase | mf | ed | doped | verify

    double beta{1.0};
    double omega{0.0};    // cavity resonance / beta; outputs are relative to it
    double delta{0.0};    // uniform detuning / beta
    double delta0{0.0};   // doped sublattice detunings / beta
    double delta1{1.0};
    double kappa{0.01};          // hopping / beta
    double mu_minus_omega{-0.5}; // (mu - omega) / beta

    std::string cell{"uniform"};  // uniform | doped (band command)
    int filling{-1};              // background n; -1 = atomic-limit rule
    std::string sector{"particle"};
    int k_points{101};
    int gap_k_points{65};

    double kappa_min{0.0};
    double kappa_max{0.15};
    int kappa_points{200};
    double mu_min{-1.2};
    double mu_max{0.2};
    int mu_points{200};

    int n_max{20};     // atomic-limit scan cap
    int mf_n_max{25};  // mean-field photon truncation
    int z{2};          // mean-field coordination number

    int cavities{4};
    std::string bc{"ring"};  // ring | open
    int target{1};           // plateau mean excitation
    std::string ed_mode{"plateau"};  // plateau | rho

    int threads{0};  // worker pool size; 0 = machine parallelism
    std::string output{"out.csv"};
    std::string summary;  // optional JSON summary path

    // resolved key/value pairs in registration order, for output headers
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

// Parses flags (--key value) plus an optional --config file of key = value
// lines; flags override file values, unknown keys are errors. Throws
// ConfigError with the offending key attached.
RunConfig parse_config(const std::vector<std::string>& args);

// Dispatches the configured command and writes its artifacts. Returns an exit
// code (verify failures map to exit_verification_failure).
int run(const RunConfig& config);

}  // namespace jch::cli

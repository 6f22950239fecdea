// jch-sim entry point: parse flags / config file, dispatch, map errors to
// distinct exit codes.
#include <exception>
#include <iostream>
#include <vector>

#include "jch/cli/config.hpp"

int main(int argc, char** argv) {
    using namespace jch::cli;
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const RunConfig config = parse_config(args);
        return run(config);
    } catch (const HelpRequested& help) {
        std::cout << help.what();
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

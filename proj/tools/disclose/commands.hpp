#pragma once

namespace CLI {
class App;
}

namespace disclose {

// Each register_* attaches one subcommand to the root app. The subcommand's
// callback runs the work and stores its exit code in exit_code; main()
// returns it after parsing. Parameter-validation exceptions
// (std::invalid_argument, std::domain_error) escape to main, which maps
// them to exit code 2.
void register_solve(CLI::App& app, int& exit_code);
void register_sweep(CLI::App& app, int& exit_code);
void register_simulate(CLI::App& app, int& exit_code);
void register_verify(CLI::App& app, int& exit_code);

}  // namespace disclose

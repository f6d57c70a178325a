#include <cstdio>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Optimal dynamic disclosure for a two-stage project: regime "
      "classification, policy solvers, Monte Carlo reconciliation"};
  app.require_subcommand(1);

  int exit_code = 0;
  disclose::register_solve(app, exit_code);
  disclose::register_sweep(app, exit_code);
  disclose::register_simulate(app, exit_code);
  disclose::register_verify(app, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0, bad usage exits 2
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hprec/error.hpp"

namespace {

int exit_code_for(hprec::ErrorCode code) {
  using hprec::ErrorCode;
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::FormatError:
      return hpcli::kIoError;
    case ErrorCode::NotHermitian:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::ZeroPower:
    case ErrorCode::DegenerateParameters:
      return hpcli::kNumericalError;
    default:
      return hpcli::kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hpcli: hybrid precoding optimizers, learned step schedules and evaluation sweeps"};
  app.require_subcommand(1);
  app.fallthrough(false);
  auto commands = hpcli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? hpcli::kOk : hpcli::kConfigError;
  }

  for (auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      cmd.settings->resolve();
      cmd.run(*cmd.settings);
      return hpcli::kOk;
    } catch (const hpcli::ConfigError& e) {
      std::cerr << "hpcli " << cmd.app->get_name() << ": config error: " << e.what() << "\n";
      return hpcli::kConfigError;
    } catch (const hprec::Error& e) {
      std::cerr << "hpcli " << cmd.app->get_name() << ": " << e.what() << "\n";
      return exit_code_for(e.code());
    } catch (const std::exception& e) {
      std::cerr << "hpcli " << cmd.app->get_name() << ": " << e.what() << "\n";
      return hpcli::kConfigError;
    }
  }
  return hpcli::kConfigError;
}

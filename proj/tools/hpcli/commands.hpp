#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <CLI11.hpp>

#include "options.hpp"

namespace hpcli {

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Settings> settings;
  std::function<void(const Settings&)> run;
};

/// Registers gen, train, convergence, sweep-snr, eval-robust and admm-run.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace hpcli

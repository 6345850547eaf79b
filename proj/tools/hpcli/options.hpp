#pragma once

#include <deque>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace hpcli {

using nlohmann::json;

/// Process exit statuses.
enum Exit : int { kOk = 0, kConfigError = 2, kIoError = 3, kNumericalError = 4 };

/// Raised for bad or inconsistent settings; maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Collects the flags of one subcommand and resolves the effective settings
/// with precedence command line > HPCLI_SEED > config file > defaults. Every
/// flag --foo-bar has the config-file key "foo_bar".
class Settings {
 public:
  explicit Settings(CLI::App* cmd);

  void add_int(const std::string& name, long long fallback, const std::string& help);
  void add_real(const std::string& name, double fallback, const std::string& help);
  void add_text(const std::string& name, const std::string& fallback, const std::string& help);
  void add_reals(const std::string& name, std::vector<double> fallback, const std::string& help);

  /// Merges the layers. Call after parsing.
  void resolve();

  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  bool given(const std::string& key) const;  // set by file or command line

  const json& effective() const { return effective_; }

 private:
  enum class Kind { Int, Real, Text, Reals };
  struct Flag {
    std::string key;
    Kind kind;
    CLI::Option* option = nullptr;
  };

  CLI::App* cmd_;
  std::string config_path_;
  std::vector<Flag> flags_;
  std::deque<long long> ints_;
  std::deque<double> real_values_;
  std::deque<std::string> texts_;
  std::deque<std::vector<double>> lists_;
  json defaults_ = json::object();
  json effective_ = json::object();
  std::vector<std::string> explicit_;
};

}  // namespace hpcli

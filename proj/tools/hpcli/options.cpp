#include "options.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace hpcli {

namespace {

std::string flag_of(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return "--" + k;
}

std::string key_of(const std::string& name) {
  std::string k = name;
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

}  // namespace

Settings::Settings(CLI::App* cmd) : cmd_(cmd) {
  cmd_->add_option("--config", config_path_, "JSON file with settings (keys are flag names with '_')");
}

void Settings::add_int(const std::string& name, long long fallback, const std::string& help) {
  auto& slot = ints_.emplace_back(fallback);
  flags_.push_back({key_of(name), Kind::Int, cmd_->add_option(flag_of(name), slot, help)});
  defaults_[key_of(name)] = fallback;
}

void Settings::add_real(const std::string& name, double fallback, const std::string& help) {
  auto& slot = real_values_.emplace_back(fallback);
  flags_.push_back({key_of(name), Kind::Real, cmd_->add_option(flag_of(name), slot, help)});
  defaults_[key_of(name)] = fallback;
}

void Settings::add_text(const std::string& name, const std::string& fallback, const std::string& help) {
  auto& slot = texts_.emplace_back(fallback);
  flags_.push_back({key_of(name), Kind::Text, cmd_->add_option(flag_of(name), slot, help)});
  defaults_[key_of(name)] = fallback;
}

void Settings::add_reals(const std::string& name, std::vector<double> fallback, const std::string& help) {
  auto& slot = lists_.emplace_back(fallback);
  flags_.push_back({key_of(name), Kind::Reals, cmd_->add_option(flag_of(name), slot, help)->delimiter(',')});
  defaults_[key_of(name)] = fallback;
}

void Settings::resolve() {
  effective_ = defaults_;

  if (!config_path_.empty()) {
    std::ifstream in(config_path_);
    if (!in) throw ConfigError("cannot open config file '" + config_path_ + "'");
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config file '" + config_path_ + "': " + e.what());
    }
    if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
      const auto it = std::find_if(flags_.begin(), flags_.end(), [&](const Flag& f) { return f.key == key; });
      if (it == flags_.end()) throw ConfigError("unknown config key '" + key + "' for '" + cmd_->get_name() + "'");
      const bool ok = (it->kind == Kind::Int && value.is_number_integer()) ||
                      (it->kind == Kind::Real && value.is_number()) || (it->kind == Kind::Text && value.is_string()) ||
                      (it->kind == Kind::Reals && value.is_array() &&
                       std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_number(); }));
      if (!ok) throw ConfigError("config key '" + key + "' has the wrong type");
      effective_[key] = value;
      explicit_.push_back(key);
    }
  }

  if (const char* env = std::getenv("HPCLI_SEED"); env != nullptr && effective_.contains("seed")) {
    try {
      std::size_t used = 0;
      const long long seed = std::stoll(env, &used);
      if (used != std::string(env).size() || seed < 0) throw std::invalid_argument("seed");
      effective_["seed"] = seed;
    } catch (const std::exception&) {
      throw ConfigError(std::string("HPCLI_SEED must be a non-negative integer, got '") + env + "'");
    }
  }

  std::size_t ii = 0, ri = 0, ti = 0, li = 0;
  for (const auto& f : flags_) {
    const bool on_cli = f.option->count() > 0;
    switch (f.kind) {
      case Kind::Int:
        if (on_cli) effective_[f.key] = ints_[ii];
        ++ii;
        break;
      case Kind::Real:
        if (on_cli) effective_[f.key] = real_values_[ri];
        ++ri;
        break;
      case Kind::Text:
        if (on_cli) effective_[f.key] = texts_[ti];
        ++ti;
        break;
      case Kind::Reals:
        if (on_cli) effective_[f.key] = lists_[li];
        ++li;
        break;
    }
    if (on_cli) explicit_.push_back(f.key);
  }
}

long long Settings::integer(const std::string& key) const { return effective_.at(key).get<long long>(); }
double Settings::real(const std::string& key) const { return effective_.at(key).get<double>(); }
std::string Settings::text(const std::string& key) const { return effective_.at(key).get<std::string>(); }
std::vector<double> Settings::reals(const std::string& key) const {
  return effective_.at(key).get<std::vector<double>>();
}

bool Settings::given(const std::string& key) const {
  return std::find(explicit_.begin(), explicit_.end(), key) != explicit_.end();
}

}  // namespace hpcli

#pragma once

// Flat "key = value" configuration files; '#' starts a comment line.

#include <map>
#include <optional>
#include <string>

namespace relwig {

class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  /// Throws std::invalid_argument when the value is not a finite number.
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

}  // namespace relwig

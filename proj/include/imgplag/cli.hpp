#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace imgplag::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,  // also missing inputs and empty corpora
  kProvider = 2,
  kOptionsMismatch = 3,
};

// Settings shared by `index` and `check`, resolved with precedence
// flags > config file > IMGPLAG_* environment > defaults.
struct Settings {
  std::map<std::string, std::string> values;

  static const std::vector<std::string>& keys();
  static std::map<std::string, std::string> defaults();
  // `key = value` lines, '#' comments. Throws ConfigError on unknown keys.
  static std::map<std::string, std::string> parse_file(const std::string& path);

  const std::string& get(const std::string& key) const;
};

Settings resolve_settings(const std::map<std::string, std::string>& flags,
                          const std::optional<std::string>& config_file);

// argv-style arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imgplag::cli

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spca/error.hpp"

namespace spca::io {

/// Configuration error that knows where in the file it happened.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Flat `key = value` file with `[section]` headers. `#` and `;` start
/// comments; blank lines are ignored. Keys before any header belong to the
/// section "".
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static Config parse(std::istream& in);
  static Config load(const std::filesystem::path& path);

  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  bool has(const std::string& section, const std::string& key) const;

  /// Rejects keys outside `allowed[section]` and sections outside `allowed`.
  void check_keys(const std::map<std::string, std::set<std::string>>& allowed) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& section, const std::string& key) const;
  std::size_t get_size(const std::string& section, const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;

  /// Replaces (or adds) a value, e.g. for command-line overrides.
  void set(const std::string& section, const std::string& key, const std::string& value);

 private:
  const Entry& entry(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// Numeric parsing helpers shared with the CLI. `inf` is accepted by
/// parse_double; both reject trailing garbage.
std::optional<double> parse_double(const std::string& text);
std::optional<std::uint64_t> parse_u64(const std::string& text);

}  // namespace spca::io

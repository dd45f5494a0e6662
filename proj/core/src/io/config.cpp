#include "spca/io/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace spca::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::optional<double> parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) return std::nullopt;
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_u64(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-' || t[0] == '+') return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, t.rfind("0x", 0) == 0 ? 16 : 10);
  if (end != t.c_str() + t.size() || errno == ERANGE) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    auto& sec = cfg.sections_[section];
    if (sec.count(key) != 0) throw ConfigError("duplicate key '" + qualified(section, key) + "'", line_no);
    sec[key] = Entry{value, line_no};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0);
  return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) != 0;
}

void Config::check_keys(const std::map<std::string, std::set<std::string>>& allowed) const {
  for (const auto& [section, entries] : sections_) {
    const auto it = allowed.find(section);
    if (it == allowed.end()) {
      const std::size_t line = entries.empty() ? 0 : entries.begin()->second.line;
      throw ConfigError("unknown section '" + section + "'", line);
    }
    for (const auto& [key, e] : entries) {
      if (it->second.count(key) == 0) throw ConfigError("unknown key '" + qualified(section, key) + "'", e.line);
    }
  }
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it != sections_.end()) {
    const auto kt = it->second.find(key);
    if (kt != it->second.end()) return kt->second;
  }
  throw ConfigError("missing required key '" + qualified(section, key) + "'", 0);
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const auto& e = entry(section, key);
  const auto v = parse_double(e.value);
  if (!v) throw ConfigError("'" + qualified(section, key) + "' is not a number: " + e.value, e.line);
  return *v;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::size_t Config::get_size(const std::string& section, const std::string& key) const {
  const auto& e = entry(section, key);
  const auto v = parse_u64(e.value);
  if (!v) throw ConfigError("'" + qualified(section, key) + "' is not a nonnegative integer: " + e.value, e.line);
  return static_cast<std::size_t>(*v);
}

std::size_t Config::get_size(const std::string& section, const std::string& key, std::size_t fallback) const {
  return has(section, key) ? get_size(section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
  return has(section, key) ? static_cast<std::uint64_t>(get_size(section, key)) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  const auto& e = entry(section, key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) {
    const auto v = parse_double(item);
    if (!v) throw ConfigError("'" + qualified(section, key) + "' has a non-numeric item: " + item, e.line);
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigError("'" + qualified(section, key) + "' is an empty list", e.line);
  return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& section, const std::string& key) const {
  const auto& e = entry(section, key);
  std::vector<std::size_t> out;
  for (const auto& item : split_list(e.value)) {
    const auto v = parse_u64(item);
    if (!v) throw ConfigError("'" + qualified(section, key) + "' has a non-integer item: " + item, e.line);
    out.push_back(static_cast<std::size_t>(*v));
  }
  if (out.empty()) throw ConfigError("'" + qualified(section, key) + "' is an empty list", e.line);
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key) const {
  const auto& e = entry(section, key);
  auto out = split_list(e.value);
  if (out.empty()) throw ConfigError("'" + qualified(section, key) + "' is an empty list", e.line);
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  auto& sec = sections_[section];
  const auto it = sec.find(key);
  const std::size_t line = it == sec.end() ? 0 : it->second.line;
  sec[key] = Entry{trim(value), line};
}

}  // namespace spca::io

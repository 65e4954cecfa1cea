#include "discflow/harness/config.hpp"

#include <fstream>
#include <sstream>

namespace discflow::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_text(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_text(ss.str());
}

void Config::merge(const Config& other) {
  for (const auto& [sec, kv] : other.sections_) {
    for (const auto& [k, v] : kv) sections_[sec][k] = v;
  }
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::gets(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  const auto kt = it->second.find(key);
  return kt == it->second.end() ? fallback : kt->second;
}

double Config::getd(const std::string& section, const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = gets(section, key, "");
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config [" + section + "] " + key + ": expected a number, got '" + v + "'");
  }
}

long Config::geti(const std::string& section, const std::string& key, long fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = gets(section, key, "");
  try {
    std::size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("config [" + section + "] " + key + ": expected an integer, got '" + v +
                      "'");
  }
}

bool Config::getb(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = gets(section, key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config [" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::string Config::canonical_text() const {
  std::ostringstream ss;
  for (const auto& [sec, kv] : sections_) {
    ss << "[" << sec << "]\n";
    for (const auto& [k, v] : kv) ss << k << " = " << v << "\n";
  }
  return ss.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

}  // namespace discflow::harness

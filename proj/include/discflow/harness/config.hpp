#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "discflow/errors.hpp"

namespace discflow::harness {

// Sectioned key-value config text:
//   [section]
//   key = value        # comment
// Values are free-form strings; typed accessors parse on demand.
class Config {
 public:
  static Config from_text(const std::string& text);
  static Config from_file(const std::string& path);

  // Values from `other` override values here.
  void merge(const Config& other);

  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;

  std::string gets(const std::string& section, const std::string& key,
                   const std::string& fallback) const;
  double getd(const std::string& section, const std::string& key, double fallback) const;
  long geti(const std::string& section, const std::string& key, long fallback) const;
  bool getb(const std::string& section, const std::string& key, bool fallback) const;

  // Sorted sections and keys; the reproducibility hash input.
  std::string canonical_text() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(const std::string& text);

}  // namespace discflow::harness

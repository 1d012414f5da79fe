#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace minkloss {

// Config-file problems carry the offending line for the CLI's error message.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// INI-style key/value file:
//   # comment
//   [section]
//   key = value
// Lists are comma separated; integer lists also accept "a..b" ranges.
// Every key must be consumed by the command reading the file;
// require_consumed() rejects leftovers with their line numbers.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& source_name);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  std::string require_string(const std::string& section,
                             const std::string& key);
  double get_double(const std::string& section, const std::string& key,
                    double fallback);
  int get_int(const std::string& section, const std::string& key,
              int fallback);
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback);
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key,
                                      std::vector<double> fallback);
  std::vector<int> get_int_list(const std::string& section,
                                const std::string& key,
                                std::vector<int> fallback);
  std::vector<std::uint64_t> get_seed_list(
      const std::string& section, const std::string& key,
      std::vector<std::uint64_t> fallback);
  std::vector<std::string> get_string_list(const std::string& section,
                                           const std::string& key,
                                           std::vector<std::string> fallback);

  void require_consumed() const;
  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };

  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section,
                       const std::string& key) const;

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Writes content to path via a temporary file and rename, so partial outputs
// are never left behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace minkloss

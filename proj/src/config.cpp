#include "minkloss/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace minkloss {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : value) {
    if (ch == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream file(path);
  if (!file)
    throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream ss;
  ss << file.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& source_name) {
  ConfigFile cfg;
  cfg.source_ = source_name;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(source_name, lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(source_name, lineno, "empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name, lineno, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(source_name, lineno, "empty key");
    auto& sec = cfg.sections_[section];
    if (sec.count(key))
      throw ConfigError(source_name, lineno, "duplicate key '" + key + "'");
    sec[key] = Entry{value, lineno, false};
  }
  return cfg;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  auto sec = sections_.find(section);
  if (sec == sections_.end()) return nullptr;
  auto it = sec->second.find(key);
  if (it == sec->second.end()) return nullptr;
  it->second.consumed = true;
  return &it->second;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section,
                                             const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw ConfigError(source_, 0,
                      "missing required key '" + key + "' in [" + section + "]");
  return *e;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto sec = sections_.find(section);
  return sec != sections_.end() && sec->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

std::string ConfigFile::require_string(const std::string& section,
                                       const std::string& key) {
  return require(section, key).value;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key, double fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(source_, e->line, "'" + key + "' is not a number");
  }
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t pos = 0;
    const int v = std::stoi(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(source_, e->line, "'" + key + "' is not an integer");
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  throw ConfigError(source_, e->line, "'" + key + "' is not a boolean");
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key,
                                                std::vector<double> fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& part : split_list(e->value)) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(part, &pos));
      if (pos != part.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError(source_, e->line,
                        "'" + key + "' has a non-numeric entry '" + part + "'");
    }
  }
  return out;
}

namespace {

// Accepts "a..b" ranges and plain integers.
template <typename T, typename Parse>
std::vector<T> parse_int_list(const std::string& value, Parse parse) {
  std::vector<T> out;
  for (const auto& part : split_list(value)) {
    const auto dots = part.find("..");
    if (dots != std::string::npos) {
      const T lo = parse(part.substr(0, dots));
      const T hi = parse(part.substr(dots + 2));
      for (T v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse(part));
    }
  }
  return out;
}

}  // namespace

std::vector<int> ConfigFile::get_int_list(const std::string& section,
                                          const std::string& key,
                                          std::vector<int> fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    return parse_int_list<int>(e->value, [](const std::string& s) {
      size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return v;
    });
  } catch (const std::exception&) {
    throw ConfigError(source_, e->line, "'" + key + "' is not an integer list");
  }
}

std::vector<std::uint64_t> ConfigFile::get_seed_list(
    const std::string& section, const std::string& key,
    std::vector<std::uint64_t> fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    return parse_int_list<std::uint64_t>(e->value, [](const std::string& s) {
      size_t pos = 0;
      const unsigned long long v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return static_cast<std::uint64_t>(v);
    });
  } catch (const std::exception&) {
    throw ConfigError(source_, e->line, "'" + key + "' is not a seed list");
  }
}

std::vector<std::string> ConfigFile::get_string_list(
    const std::string& section, const std::string& key,
    std::vector<std::string> fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  return split_list(e->value);
}

void ConfigFile::require_consumed() const {
  std::string complaints;
  int first_line = 0;
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (entry.consumed) continue;
      if (!complaints.empty()) complaints += "; ";
      complaints += "unknown key '" + key + "' in [" + section + "] (line " +
                    std::to_string(entry.line) + ")";
      if (first_line == 0) first_line = entry.line;
    }
  }
  if (!complaints.empty()) throw ConfigError(source_, first_line, complaints);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + tmp + " for writing");
    file << content;
    if (!file) throw std::runtime_error("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace minkloss

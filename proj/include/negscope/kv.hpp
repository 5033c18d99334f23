#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace negscope {

// Line-oriented key=value file, used for manifests and backend configs.
// Keys keep insertion order; '#' starts a comment line.
class KvFile {
 public:
  void set(const std::string& key, const std::string& value);
  // Keeps C-string literals away from the bool overload.
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, long long value);
  void set(const std::string& key, double value);
  void set(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string* find(const std::string& key) const;

  // Throw ConfigError when the key is missing or malformed.
  std::string get(const std::string& key) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  std::string get_or(const std::string& key, const std::string& fallback) const;
  long long get_int_or(const std::string& key, long long fallback) const;

  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static KvFile read(std::istream& in);
  static KvFile load(const std::string& path);

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace negscope

#include "negscope/kv.hpp"

#include <fstream>
#include <sstream>

#include "negscope/errors.hpp"

namespace negscope {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void KvFile::set(const std::string& key, const std::string& value) {
  for (auto& it : items_) {
    if (it.first == key) {
      it.second = value;
      return;
    }
  }
  items_.emplace_back(key, value);
}

void KvFile::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

void KvFile::set(const std::string& key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  set(key, os.str());
}

void KvFile::set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

bool KvFile::has(const std::string& key) const { return find(key) != nullptr; }

const std::string* KvFile::find(const std::string& key) const {
  for (const auto& it : items_) {
    if (it.first == key) return &it.second;
  }
  return nullptr;
}

std::string KvFile::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw ConfigError("missing key '" + key + "'");
  return *v;
}

long long KvFile::get_int(const std::string& key) const {
  const std::string v = get(key);
  try {
    size_t used = 0;
    long long out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not an integer: '" + v + "'");
  }
}

double KvFile::get_double(const std::string& key) const {
  const std::string v = get(key);
  try {
    size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not a number: '" + v + "'");
  }
}

bool KvFile::get_bool(const std::string& key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "' is not a boolean: '" + v + "'");
}

std::string KvFile::get_or(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

long long KvFile::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

void KvFile::write(std::ostream& out) const {
  for (const auto& it : items_) out << it.first << "=" << it.second << "\n";
}

void KvFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
}

KvFile KvFile::read(std::istream& in) {
  KvFile kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed key=value line: '" + t + "'");
    kv.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return kv;
}

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  return read(in);
}

}  // namespace negscope

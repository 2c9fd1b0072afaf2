#pragma once

#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

namespace bowtie {

/// Shortest-exact float formatting used for every CSV/report number so that
/// repeated runs are byte-identical.
std::string fmt_g17(double v);

// FNV-1a over raw double bits
inline uint64_t fnv1a_init() { return 1469598103934665603ull; }
inline uint64_t fnv1a_bytes(uint64_t h, const void* data, size_t n) {
  const unsigned char* b = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}
inline uint64_t fnv1a(uint64_t h, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return fnv1a_bytes(h, &bits, sizeof bits);
}
inline uint64_t fnv1a(uint64_t h, const std::string& s) {
  return fnv1a_bytes(h, s.data(), s.size());
}

/// key = value config file: '#' comments, blank lines ignored, values are
/// scalars or comma-separated lists.
struct KeyValueConfig {
  std::map<std::string, std::string> values;

  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return values.count(key) > 0; }
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bowtie

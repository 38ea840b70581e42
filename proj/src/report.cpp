#include "interplab/report.hpp"

#include <cmath>
#include <cstdio>

namespace interplab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void Report::put(const std::string& key, double v) {
  const std::string r = format_double(v);
  entries_[key] = std::isfinite(v) ? r : "\"" + r + "\"";
}

void Report::put(const std::string& key, long long v) { entries_[key] = std::to_string(v); }

void Report::put(const std::string& key, bool v) { entries_[key] = v ? "true" : "false"; }

void Report::put(const std::string& key, const std::string& v) {
  entries_[key] = "\"" + escape(v) + "\"";
}

std::string Report::to_json() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, literal] : entries_) {
    if (!first) out += ", ";
    first = false;
    out += "\"" + escape(key) + "\": " + literal;
  }
  out += "}\n";
  return out;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string scan_table_csv(const std::vector<ScanRow>& rows) {
  std::string out = "sigma_or_s_or_absz,arg,value\n";
  for (const ScanRow& r : rows) {
    out += format_double(r.abscissa);
    out += ",";
    out += format_double(r.arg);
    out += ",";
    out += format_double(r.value);
    out += "\n";
  }
  return out;
}

}  // namespace interplab

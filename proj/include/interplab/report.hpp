#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace interplab {

// %.12e rendering used for every floating-point artifact value.  Non-finite
// values (which JSON numbers cannot carry) come back as the words inf/-inf/
// nan and are emitted as quoted strings by Report.
std::string format_double(double v);

// Flat key/value report with pinned rendering: keys are emitted sorted,
// doubles as %.12e, so a given set of entries always serializes to the
// same bytes.
class Report {
 public:
  void put(const std::string& key, double v);
  void put(const std::string& key, long long v);
  void put(const std::string& key, int v) { put(key, static_cast<long long>(v)); }
  void put(const std::string& key, bool v);
  void put(const std::string& key, const std::string& v);
  // single-line JSON object terminated by a newline
  std::string to_json() const;

 private:
  std::map<std::string, std::string> entries_;  // key -> rendered literal
};

// FNV-1a (64-bit); chain calls via the seed argument to hash several pieces
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 14695981039346656037ull);
std::string hash_hex(std::uint64_t h);

// 3-column scan table shared by the scanning subcommands; the first column
// holds whichever abscissa the scan varies (sigma, s, or |z|)
struct ScanRow {
  double abscissa = 0.0;
  double arg = 0.0;
  double value = 0.0;
};
// header line plus one %.12e row per entry; an empty row set yields just
// the header
std::string scan_table_csv(const std::vector<ScanRow>& rows);

}  // namespace interplab

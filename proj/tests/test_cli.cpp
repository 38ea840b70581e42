#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "interplab/report.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kBin = INTERPLAB_CLI_BIN;
const fs::path kConfigs = INTERPLAB_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "interplab_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct RunResult {
  int code = -1;
  std::string err;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path errfile =
      fs::temp_directory_path() / ("interplab_cli_stderr_" + std::to_string(counter++) + ".txt");
  const std::string cmd = kBin.string() + " " + args + " 2> " + errfile.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = status == -1 ? -1 : WEXITSTATUS(status);
  std::ifstream in(errfile);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  fs::remove(errfile);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json report_at(const fs::path& p) { return json::parse(slurp(p)); }

int line_count(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("kfunc example config: scan artifact plus the value at t = 1") {
  const fs::path out = scratch("kfunc");
  const RunResult r = run("kfunc --config " + (kConfigs / "kfunc_l1.json").string() +
                          " --out-dir " + out.string());
  CHECK(r.code == 0);

  const json rep = report_at(out / "kfunc_report.json");
  CHECK(rep.at("command") == "kfunc");
  CHECK(rep.at("schema_version") == 1);
  CHECK(rep.at("points") == 61);
  // equal couples make the decomposition trivial: K(1, x) is the plain norm
  CHECK(std::abs(rep.at("value_at_t1").get<double>() - 2.0) <= 1e-4 * 2.0);
  const std::string hash = rep.at("config_hash").get<std::string>();
  CHECK(hash.size() == 16);
  CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);

  const std::string csv = slurp(out / "kfunc_scan.csv");
  CHECK(csv.rfind("sigma_or_s_or_absz,arg,value\n", 0) == 0);
  CHECK(line_count(csv) == 62);  // header + one row per grid point
}

TEST_CASE("scalar closed-form config reproduces the exact interpolation norm") {
  const fs::path out = scratch("scalar");
  const RunResult r = run("interp-norm --config " +
                          (kConfigs / "interp_norm_scalar.json").string() + " --out-dir " +
                          out.string());
  CHECK(r.code == 0);
  const double v = report_at(out / "interp_norm_report.json").at("value").get<double>();
  CHECK(std::abs(v - std::sqrt(2.0)) <= 1e-6 * std::sqrt(2.0));
}

TEST_CASE("schema violations exit 2 and name the offending field path") {
  const fs::path out = scratch("schema");

  const RunResult bad_theta = run("interp-norm --config " +
                                  (kConfigs / "invalid_theta.json").string() + " --out-dir " +
                                  out.string());
  CHECK(bad_theta.code == 2);
  CHECK(bad_theta.err.find("params.theta") != std::string::npos);
  CHECK(!fs::exists(out / "report.json"));  // no artifacts on a rejected config

  // declared command must match the subcommand
  const RunResult mismatch = run("kfunc --config " +
                                 (kConfigs / "interp_norm_scalar.json").string() + " --out-dir " +
                                 out.string());
  CHECK(mismatch.code == 2);
  CHECK(mismatch.err.find("command") != std::string::npos);

  // sampling commands refuse to run without a seed
  json cfg = json::parse(slurp(kConfigs / "rademacher.json"));
  cfg.erase("seed");
  const fs::path noseed = out / "rademacher_noseed.json";
  std::ofstream(noseed) << cfg.dump();
  const RunResult seedless = run("rademacher --config " + noseed.string() + " --out-dir " +
                                 out.string());
  CHECK(seedless.code == 2);
  CHECK(seedless.err.find("seed") != std::string::npos);

  const RunResult usage = run("interp-norm");
  CHECK(usage.code == 2);

  const RunResult missing = run("interp-norm --config " + (out / "nope.json").string());
  CHECK(missing.code == 3);

  const RunResult unwritable = run("rademacher --config " +
                                   (kConfigs / "rademacher.json").string() +
                                   " --out-dir /proc/self/nope");
  CHECK(unwritable.code == 3);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");

  // a sampling command and a representation-producing command
  for (const std::string sub : {"rademacher", "mean-min"}) {
    const std::string cfg =
        (kConfigs / (sub == "rademacher" ? "rademacher.json" : "mean_min_small.json")).string();
    CHECK(run(sub + " --config " + cfg + " --out-dir " + a.string()).code == 0);
    CHECK(run(sub + " --config " + cfg + " --out-dir " + b.string()).code == 0);
  }
  CHECK(slurp(a / "rademacher_report.json") == slurp(b / "rademacher_report.json"));
  CHECK(slurp(a / "mean_min_report.json") == slurp(b / "mean_min_report.json"));
  CHECK(slurp(a / "mean_min_rep.csv") == slurp(b / "mean_min_rep.csv"));

  // the sign average is exhaustive, so a seed override may only move the
  // provenance fields
  const fs::path c = scratch("det_c");
  CHECK(run("rademacher --config " + (kConfigs / "rademacher.json").string() + " --seed 9" +
            " --out-dir " + c.string())
            .code == 0);
  const json base = report_at(a / "rademacher_report.json");
  const json moved = report_at(c / "rademacher_report.json");
  CHECK(base.at("seed") == 7);
  CHECK(moved.at("seed") == 9);
  CHECK(base.at("config_hash") != moved.at("config_hash"));
  CHECK(base.at("average") == moved.at("average"));
  CHECK(base.at("average").get<double>() == 5.0);
}

TEST_CASE("sector scan on a non-sectorial matrix keeps the header-only table") {
  const fs::path out = scratch("nonsector");
  json cfg;
  cfg["command"] = "sector-scan";
  cfg["matrix"] = {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {-2.0, 0.0}}};
  cfg["space"] = {{"r", 2}, {"weights", {1.0, 1.0}}};
  const fs::path path = out / "nonsector.json";
  std::ofstream(path) << cfg.dump();

  CHECK(run("sector-scan --config " + path.string() + " --out-dir " + out.string()).code == 0);
  const json rep = report_at(out / "report.json");
  CHECK(rep.at("not_sectorial") == true);
  CHECK(slurp(out / "table.csv") == "sigma_or_s_or_absz,arg,value\n");
}

TEST_CASE("report rendering: pinned float format, sorted keys, chained hash") {
  using namespace interplab;

  CHECK(format_double(1.25) == "1.250000000000e+00");
  CHECK(format_double(-0.5) == "-5.000000000000e-01");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");

  Report rep;
  rep.put("zeta", 2.0);
  rep.put("alpha", true);
  rep.put("mid", std::string("x\"y"));
  rep.put("count", 7);
  rep.put("bad", std::numeric_limits<double>::infinity());
  CHECK(rep.to_json() ==
        "{\"alpha\": true, \"bad\": \"inf\", \"count\": 7, \"mid\": \"x\\\"y\", "
        "\"zeta\": 2.000000000000e+00}\n");

  // FNV-1a: empty input returns the offset basis; chaining differs from
  // hashing either piece alone
  CHECK(fnv1a64(nullptr, 0) == 14695981039346656037ull);
  const std::uint64_t h1 = fnv1a64("ab", 2);
  const std::uint64_t h2 = fnv1a64("b", 1, fnv1a64("a", 1));
  CHECK(h1 == h2);
  CHECK(fnv1a64("a", 1) != fnv1a64("b", 1));
  CHECK(hash_hex(0x1a2b3c4dull) == "000000001a2b3c4d");

  CHECK(scan_table_csv({}) == "sigma_or_s_or_absz,arg,value\n");
  const std::string one = scan_table_csv({{0.5, -1.0, 3.0}});
  CHECK(one ==
        "sigma_or_s_or_absz,arg,value\n5.000000000000e-01,-1.000000000000e+00,"
        "3.000000000000e+00\n");
}

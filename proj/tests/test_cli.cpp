#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cloakbench_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Result run(const std::string& args) {
  const fs::path err = scratch("stderr.txt");
  const std::string cmd = std::string(CLOAKBENCH_PATH) + " " + args + " >/dev/null 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

bool empty_or_missing(const fs::path& dir) { return !fs::exists(dir) || fs::is_empty(dir); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run("").status == 2);
  CHECK(run("nonsense").status == 2);
  const fs::path out = scratch("usage_out");
  const auto r = run("quasistatic --out " + out.string());
  CHECK(r.status == 2);
  CHECK(r.err.find("--config") != std::string::npos);
  CHECK(empty_or_missing(out));
  CHECK(run("quasistatic --defaults --config x.cfg --out " + out.string()).status == 2);
  CHECK(run("helmholtz --defaults --grid 1 5 --out " + out.string()).status == 2);
  CHECK(empty_or_missing(out));
}

TEST_CASE("missing config file is a usage error without partial files") {
  const fs::path out = scratch("missing_out");
  const auto r = run("helmholtz --config /nonexistent/cloak.cfg --out " + out.string());
  CHECK(r.status == 2);
  CHECK(empty_or_missing(out));
}

TEST_CASE("malformed config reports the line number") {
  const fs::path out = scratch("malformed_out");
  const auto cfg = write_config("bad.cfg", "# header\nn = 10\nthis line has no equals sign\n");
  const auto r = run("quasistatic --config " + cfg.string() + " --out " + out.string());
  CHECK(r.status == 3);
  CHECK(r.err.find("bad.cfg:3") != std::string::npos);
  CHECK(empty_or_missing(out));

  const auto unknown = write_config("unknown.cfg", "N = 10\ntauC = 1e-3\n");
  const auto u = run("helmholtz --no-grid --config " + unknown.string() + " --out " + out.string());
  CHECK(u.status == 3);
  CHECK(u.err.find("unknown.cfg:2") != std::string::npos);
  CHECK(u.err.find("tauC") != std::string::npos);

  const auto badval = write_config("badval.cfg", "grid = 21 21\nwindow = -3 3 -3\n");
  const auto b = run("quasistatic --config " + badval.string() + " --out " + out.string());
  CHECK(b.status == 3);
  CHECK(b.err.find("badval.cfg:2") != std::string::npos);
  CHECK(empty_or_missing(out));
}

TEST_CASE("quasistatic run writes every output and is deterministic") {
  const auto cfg = write_config("qs.cfg", "n = 10\ngrid = 41 41\n");
  const fs::path a = scratch("qs_a"), b = scratch("qs_b");
  REQUIRE(run("quasistatic --config " + cfg.string() + " --out " + a.string()).status == 0);
  REQUIRE(run("quasistatic --config " + cfg.string() + " --out " + b.string()).status == 0);
  for (const char* f : {"quasistatic_off.csv", "quasistatic_on.csv", "quasistatic_device_contour.csv",
                        "quasistatic_quiet_contour.csv", "quasistatic_report.txt"}) {
    INFO(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string grid = slurp(a / "quasistatic_on.csv");
  CHECK(grid.rfind("x,y,re,im,mask\n", 0) == 0);
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 41 * 41 + 1);
  CHECK(slurp(a / "quasistatic_device_contour.csv").rfind("polyline,x,y\n", 0) == 0);
  const std::string rep = slurp(a / "quasistatic_report.txt");
  for (const char* key : {"rel_inc = ", "rel_scat = ", "quiet_zone_max = ", "n = ", "grid.nx = "})
    CHECK(rep.find(key) != std::string::npos);
}

TEST_CASE("device selection flags") {
  const fs::path out = scratch("qs_on_only");
  REQUIRE(run("quasistatic --defaults --grid 11 11 --devices-on --out " + out.string()).status == 0);
  CHECK(fs::exists(out / "quasistatic_on.csv"));
  CHECK_FALSE(fs::exists(out / "quasistatic_off.csv"));
  CHECK(slurp(out / "quasistatic_report.txt").find("n = 10") != std::string::npos);
  const fs::path n12 = scratch("qs_n12");
  REQUIRE(run("quasistatic --defaults --grid 11 11 --n 12 --out " + n12.string()).status == 0);
  CHECK(slurp(n12 / "quasistatic_report.txt").find("n = 12") != std::string::npos);
}

TEST_CASE("helmholtz run without grids") {
  const fs::path out = scratch("hz");
  REQUIRE(run("helmholtz --defaults --no-grid --out " + out.string()).status == 0);
  CHECK(fs::exists(out / "helmholtz_report.txt"));
  CHECK(fs::exists(out / "helmholtz_coefficients.csv"));
  CHECK_FALSE(fs::exists(out / "helmholtz_on.csv"));
  const std::string rep = slurp(out / "helmholtz_report.txt");
  for (const char* key : {"rel_inc = ", "rel_scat = ", "tauA = ", "tauB = ", "device_angles = ", "kite_scale_lambda = "})
    CHECK(rep.find(key) != std::string::npos);
  CHECK(slurp(out / "helmholtz_coefficients.csv").rfind("device,n,re,im\n", 0) == 0);
}

TEST_CASE("levelset on an exported grid") {
  const fs::path src = scratch("ls_src");
  REQUIRE(run("quasistatic --defaults --grid 31 31 --devices-on --out " + src.string()).status == 0);
  const fs::path out = scratch("ls_out");
  REQUIRE(run("levelset --input " + (src / "quasistatic_on.csv").string() + " --level 0.5 --level 2 --out " +
              out.string())
              .status == 0);
  CHECK(fs::exists(out / "levelset_contour_0.csv"));
  CHECK(fs::exists(out / "levelset_contour_1.csv"));
  CHECK(fs::exists(out / "levelset_report.txt"));
  const auto bad = write_config("notgrid.csv", "a,b\n1,2\n");
  CHECK(run("levelset --input " + bad.string() + " --level 1 --out " + out.string()).status != 0);
}

TEST_CASE("specfun-check and report subcommands") {
  const fs::path out = scratch("sf");
  REQUIRE(run("specfun-check --out " + out.string()).status == 0);
  CHECK(slurp(out / "specfun_check.txt").find("wronskian") != std::string::npos);
  const fs::path rp = scratch("rp");
  REQUIRE(run("report --defaults --out " + rp.string()).status == 0);
  const std::string rep = slurp(rp / "report.txt");
  CHECK(rep.find("quasistatic.rel_inc = ") != std::string::npos);
  CHECK(rep.find("helmholtz.rel_inc = ") != std::string::npos);
}

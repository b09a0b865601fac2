// Drives the installed command-line tool as a subprocess.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = METALINE_CLI_PATH;
const std::string kConfigDir = METALINE_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("metaline_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Bundled config with some keys replaced or added.
fs::path variant(const fs::path& dir, const std::string& base,
                 const std::map<std::string, std::string>& overrides) {
  std::ifstream in(kConfigDir + "/" + base);
  std::string text;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      std::string key = line.substr(0, eq);
      key.erase(key.find_last_not_of(' ') + 1);
      if (overrides.count(key)) continue;
    }
    text += line + "\n";
  }
  for (const auto& [k, v] : overrides) text += k + " = " + v + "\n";
  const fs::path out = dir / ("variant_" + base);
  std::ofstream(out) << text;
  return out;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
  }
  double num(std::size_t row, const std::string& name) const { return std::stod(rows[row][col(name)]); }
  const std::string& text(std::size_t row, const std::string& name) const {
    return rows[row][col(name)];
  }
};

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.columns.empty()) {
      t.columns = cells;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

std::string cfg(const std::string& name) { return " --config " + kConfigDir + "/" + name; }

}  // namespace

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "bad.cfg") << "circuit.n_left = 10\ncircuit.nonsense = 1\n";
  CHECK(run("modes --config " + (dir / "bad.cfg").string() + " --out " + dir.string()) == 2);
  CHECK(run("modes --config " + (dir / "absent.cfg").string()) == 1);
  CHECK(run("modes") == 2);
  CHECK(run("frobnicate" + cfg("fig2.cfg")) == 2);
  CHECK(run("--version") == 0);

  // Dynamics needs a splitting; fig2 does not set one.
  CHECK(run("dynamics" + cfg("fig2.cfg") + " --out " + dir.string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical") {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  REQUIRE(run("modes" + cfg("fig2.cfg") + " --out " + a.string() + " --threads 1") == 0);
  REQUIRE(run("modes" + cfg("fig2.cfg") + " --out " + b.string() + " --threads 2") == 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    CAPTURE(other);
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  CHECK(compared == 4);

  const std::string head = slurp(a / "modes.csv").substr(0, 200);
  CHECK(head.rfind("# metaline 1.0.0\n# command: modes\n# config_hash: ", 0) == 0);

  const Table modes = read_csv(a / "modes.csv");
  REQUIRE(!modes.rows.empty());
  CHECK(modes.num(0, "freq_over_ir") >= 1.0);
  CHECK(modes.num(0, "freq_over_ir") <= 1.005);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("empty window writes header-only files") {
  const fs::path dir = scratch("empty");
  const fs::path c = variant(dir, "fig3.cfg", {{"modes.f_min_ghz", "3.1"}, {"modes.f_max_ghz", "3.2"}});
  for (const char* cmd : {"modes", "dynamics"}) {
    CAPTURE(cmd);
    REQUIRE(run(std::string(cmd) + " --config " + c.string() + " --out " + dir.string()) == 0);
  }
  for (const char* f : {"modes.csv", "dom.csv", "couplings.csv", "entropy.csv"}) {
    CAPTURE(f);
    const Table t = read_csv(dir / f);
    CHECK(!t.columns.empty());
    CHECK(t.rows.empty());
  }
  fs::remove_all(dir);
}

TEST_CASE("output stem and profiles") {
  const fs::path dir = scratch("stem");
  const fs::path c = variant(dir, "fig2.cfg", {{"output.stem", "run7"}});
  REQUIRE(run("modes --profiles --config " + c.string() + " --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "run7_modes.csv"));
  const Table t = read_csv(dir / "run7_modes.csv");
  CHECK(t.columns.size() == 4 + 500);
  CHECK(t.columns[4] == "v0");
  fs::remove_all(dir);
}

TEST_CASE("dynamics output") {
  const fs::path dir = scratch("dynamics");
  REQUIRE(run("dynamics" + cfg("fig3.cfg") + " --out " + dir.string()) == 0);
  const Table t = read_csv(dir / "entropy.csv");
  REQUIRE(!t.rows.empty());
  std::size_t populated = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double tg = t.num(r, "tg");
    if (tg == 0.0) {
      CHECK(t.num(r, "e_q") == 0.0);
      continue;
    }
    CHECK(t.num(r, "e_q") > 0.0);
    if (t.num(r, "population") > 1e-6) {
      ++populated;
      CHECK(t.num(r, "e_n") >= t.num(r, "e_q"));
    }
  }
  CHECK(populated > 0);
  fs::remove_all(dir);
}

TEST_CASE("renormalization output") {
  const fs::path dir = scratch("renorm");
  REQUIRE(run("renorm" + cfg("fig4.cfg") + " --out " + dir.string()) == 0);
  const Table t = read_csv(dir / "renorm.csv");
  REQUIRE(t.rows.size() == 201);
  CHECK(t.num(0, "g_ghz") == 0.0);
  CHECK(t.num(0, "delta_eff_ghz") == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(t.num(0, "log10_ratio") == 0.0);
  CHECK(t.text(0, "phase") == "delocalized");
  CHECK(t.text(t.rows.size() - 1, "phase") == "localized");
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    CHECK(t.num(r, "log10_ratio") <= t.num(r - 1, "log10_ratio"));
    CHECK(t.num(r, "converged") == 1.0);
  }

  const Table jumps = read_csv(dir / "renorm_jumps.csv");
  int profile_jumps = 0;
  for (std::size_t r = 0; r < jumps.rows.size(); ++r) {
    if (jumps.text(r, "curve") != "profile") continue;
    ++profile_jumps;
    CHECK(jumps.num(r, "log10_drop") > 2.0);
    CHECK(jumps.num(r, "g_lo_ghz") < jumps.num(r, "g_hi_ghz"));
  }
  CHECK(profile_jumps == 1);
  fs::remove_all(dir);
}

TEST_CASE("phase output") {
  const fs::path dir = scratch("phase");
  REQUIRE(run("phase" + cfg("fig5.cfg") + " --out " + dir.string(), "METALINE_THREADS=2") == 0);
  const Table cells = read_csv(dir / "phase.csv");
  CHECK(cells.rows.size() == 30 * 201);
  const Table b = read_csv(dir / "boundary.csv");
  REQUIRE(b.rows.size() == 30);
  double last = 0.0;
  for (std::size_t r = 0; r < b.rows.size(); ++r) {
    CHECK(b.num(r, "found") == 1.0);
    CHECK(std::isfinite(b.num(r, "g_star_ghz")));
    CHECK(b.num(r, "g_star_ghz") >= last);
    last = b.num(r, "g_star_ghz");
  }
  CHECK(b.num(b.rows.size() - 1, "discontinuous") == 1.0);
  fs::remove_all(dir);
}

TEST_CASE("disorder statistics") {
  const fs::path dir = scratch("disorder");
  SUBCASE("no disorder has no spread") {
    const fs::path c = variant(dir, "disorder.cfg", {{"disorder.sigma", "0"}, {"disorder.seeds", "3"}});
    REQUIRE(run("disorder --config " + c.string() + " --out " + dir.string()) == 0);
    const Table t = read_csv(dir / "disorder.csv");
    REQUIRE(t.rows.size() == 5);
    CHECK(t.text(3, "seed") == "mean");
    CHECK(t.text(4, "seed") == "stddev");
    CHECK(t.num(4, "edge_ghz") == 0.0);
    CHECK(t.num(4, "band_count") == 0.0);
    CHECK(t.num(3, "band_count") == doctest::Approx(52.0).epsilon(0.1));
  }
  SUBCASE("single seed summary equals the sample") {
    const fs::path c = variant(dir, "disorder.cfg", {{"disorder.seeds", "1"}, {"disorder.seed_base", "9"}});
    REQUIRE(run("disorder --config " + c.string() + " --out " + dir.string()) == 0);
    const Table t = read_csv(dir / "disorder.csv");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.text(0, "seed") == "9");
    CHECK(t.text(1, "edge_ghz") == t.text(0, "edge_ghz"));
    CHECK(t.num(2, "edge_ghz") == 0.0);
  }
  fs::remove_all(dir);
}

TEST_CASE("thread count from the environment") {
  const fs::path dir = scratch("threads");
  CHECK(run("modes" + cfg("fig2.cfg") + " --out " + dir.string(), "METALINE_THREADS=many") == 2);
  CHECK(run("modes" + cfg("fig2.cfg") + " --out " + dir.string(), "METALINE_THREADS=1") == 0);
  CHECK(run("modes" + cfg("fig2.cfg") + " --threads -3 --out " + dir.string()) == 2);
  fs::remove_all(dir);
}

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "metaline/metaline.h"

namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = METALINE_CONFIG_DIR;

const char* kSmall = R"(
circuit.n_left = 40
circuit.z0 = 50
circuit.f_ir_ghz = 4
circuit.cell_pitch = 1e-4
circuit.rhtl_length = 0.01
circuit.n_right = 100
modes.f_min_ghz = 3
modes.f_max_ghz = 12
qubit.anchor_ghz = 5
qubit.g_ghz = 0.1
qubit.delta0_ghz = 5
)";

struct Config {
  metaline_config* ptr = nullptr;
  ~Config() { metaline_config_free(ptr); }
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("metaline_capi_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::string(metaline_version()) == "1.0.0");
  Config c;
  CHECK(metaline_config_parse(kSmall, &c.ptr) == METALINE_OK);
  CHECK(std::string(metaline_last_error()).empty());
  CHECK(metaline_last_error_line() == 0);
}

TEST_CASE("config errors carry status and line") {
  Config c;
  const std::string bad = std::string(kSmall) + "qubit.extent = wide\n";
  CHECK(metaline_config_parse(bad.c_str(), &c.ptr) == METALINE_ERR_CONFIG);
  CHECK(c.ptr == nullptr);
  CHECK(metaline_last_error_line() == 13);
  CHECK(std::string(metaline_last_error()).find("qubit.extent") != std::string::npos);

  CHECK(metaline_config_load((kConfigDir + "/missing.cfg").c_str(), &c.ptr) == METALINE_ERR_IO);
  CHECK(metaline_config_parse(nullptr, &c.ptr) == METALINE_ERR_NULL_ARGUMENT);
  CHECK(metaline_config_parse(kSmall, nullptr) == METALINE_ERR_NULL_ARGUMENT);
}

TEST_CASE("echo and hash") {
  Config c;
  REQUIRE(metaline_config_load((kConfigDir + "/fig2.cfg").c_str(), &c.ptr) == METALINE_OK);
  CHECK(metaline_config_omega_ir(c.ptr) == doctest::Approx(2.0 * M_PI * 4e9));

  size_t needed = 0;
  CHECK(metaline_config_echo(c.ptr, nullptr, 0, &needed) == METALINE_OK);
  REQUIRE(needed > 1);
  char small[8];
  CHECK(metaline_config_echo(c.ptr, small, sizeof small, nullptr) == METALINE_ERR_BUFFER_TOO_SMALL);
  CHECK(small[0] == '\0');
  std::vector<char> text(needed);
  CHECK(metaline_config_echo(c.ptr, text.data(), text.size(), &needed) == METALINE_OK);
  CHECK(std::strlen(text.data()) + 1 == needed);

  Config again;
  REQUIRE(metaline_config_parse(text.data(), &again.ptr) == METALINE_OK);
  char h1[17];
  char h2[17];
  CHECK(metaline_config_hash(c.ptr, h1, sizeof h1) == METALINE_OK);
  CHECK(metaline_config_hash(again.ptr, h2, sizeof h2) == METALINE_OK);
  CHECK(std::string(h1) == std::string(h2));
  CHECK(metaline_config_hash(c.ptr, h1, 16) == METALINE_ERR_BUFFER_TOO_SMALL);
}

TEST_CASE("design helper") {
  double c = 0.0;
  double l = 0.0;
  const double w = 2.0 * M_PI * 4e9;
  REQUIRE(metaline_design_from_impedance(50.0, w, &c, &l) == METALINE_OK);
  CHECK(std::sqrt(l / c) == doctest::Approx(50.0));
  CHECK(1.0 / (2.0 * std::sqrt(l * c)) == doctest::Approx(w));
  CHECK(metaline_design_from_impedance(-1.0, w, &c, &l) == METALINE_ERR_DOMAIN);
  CHECK(metaline_design_from_impedance(50.0, w, nullptr, &l) == METALINE_ERR_NULL_ARGUMENT);
}

TEST_CASE("modes through the handle") {
  Config c;
  REQUIRE(metaline_config_parse(kSmall, &c.ptr) == METALINE_OK);
  metaline_modes* m = nullptr;
  REQUIRE(metaline_modes_solve(c.ptr, &m) == METALINE_OK);
  const size_t n = metaline_modes_count(m);
  REQUIRE(n > 5);

  std::vector<double> w(n);
  CHECK(metaline_modes_frequencies(m, w.data(), n - 1) == METALINE_ERR_BUFFER_TOO_SMALL);
  REQUIRE(metaline_modes_frequencies(m, w.data(), n) == METALINE_OK);
  for (size_t i = 0; i < n; ++i) {
    CHECK(w[i] >= 2.0 * M_PI * 3e9);
    CHECK(w[i] <= 2.0 * M_PI * 12e9);
    if (i > 0) CHECK(w[i] >= w[i - 1]);
  }

  std::vector<double> rel(n);
  std::vector<double> g(n);
  REQUIRE(metaline_modes_couplings(m, rel.data(), g.data(), n) == METALINE_OK);
  double peak = 0.0;
  for (size_t i = 0; i < n; ++i) {
    CHECK(rel[i] >= 0.0);
    CHECK(g[i] == doctest::Approx(rel[i] * 2.0 * M_PI * 0.1e9));
    peak = std::max(peak, rel[i]);
  }
  CHECK(peak == 1.0);
  metaline_modes_free(m);
  CHECK(metaline_modes_count(nullptr) == 0);
}

TEST_CASE("renormalization") {
  const double w[] = {3.0, 1.0, 2.0};
  const double g[] = {0.3, 0.1, 0.2};
  double d = 0.0;
  double lr = 1.0;
  int ok = 0;
  // All modes above the splitting: lambda = g/w = 0.1 each, so ln ratio = -2 * 0.03.
  REQUIRE(metaline_renormalize(w, g, 3, 0.5, 0, &d, &lr, &ok) == METALINE_OK);
  CHECK(ok == 1);
  CHECK(lr == doctest::Approx(-0.06));
  CHECK(d == doctest::Approx(0.5 * std::exp(-0.06)));
  REQUIRE(metaline_renormalize(w, g, 3, 0.5, 1, &d, &lr, nullptr) == METALINE_OK);
  CHECK(lr == doctest::Approx(-2.0 * 3.0 * 1e-4));
  CHECK(metaline_renormalize(nullptr, nullptr, 0, 0.5, 0, &d, nullptr, nullptr) == METALINE_ERR_DOMAIN);
  CHECK(metaline_renormalize(w, g, 3, -1.0, 0, &d, nullptr, nullptr) != METALINE_OK);
  CHECK(metaline_renormalize(nullptr, g, 3, 0.5, 0, &d, nullptr, nullptr) ==
        METALINE_ERR_NULL_ARGUMENT);
}

TEST_CASE("run a command into a directory") {
  Config c;
  REQUIRE(metaline_config_parse(kSmall, &c.ptr) == METALINE_OK);
  const fs::path dir = scratch("run");
  metaline_run_options opts{};
  const std::string out = dir.string();
  opts.out_dir = out.c_str();
  opts.threads = 1;
  char summary[256];
  REQUIRE(metaline_run(c.ptr, "modes", &opts, summary, sizeof summary) == METALINE_OK);
  CHECK(std::strlen(summary) > 0);
  for (const char* f : {"modes.csv", "dom.csv", "dom_binned.csv", "couplings.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  std::ifstream in(dir / "modes.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first == "# metaline 1.0.0");

  char tiny[4];
  REQUIRE(metaline_run(c.ptr, "modes", &opts, tiny, sizeof tiny) == METALINE_OK);
  CHECK(std::strlen(tiny) == 3);

  CHECK(metaline_run(c.ptr, "bogus", &opts, nullptr, 0) != METALINE_OK);
  CHECK(metaline_run(nullptr, "modes", &opts, nullptr, 0) == METALINE_ERR_NULL_ARGUMENT);
  fs::remove_all(dir);
}

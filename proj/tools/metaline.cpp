// metaline <modes|dynamics|renorm|phase|disorder> --config <path> [--out <dir>] [--threads N] [--profiles]

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "metaline/metaline.h"

namespace {

int exit_code(metaline_status s) {
  switch (s) {
    case METALINE_OK: return 0;
    case METALINE_ERR_CONFIG: return 2;
    case METALINE_ERR_NUMERICAL: return 3;
    default: return 1;
  }
}

int report(metaline_status s) {
  std::fprintf(stderr, "metaline: %s\n", metaline_last_error());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal modes, qubit dynamics and renormalization on hybrid metamaterial lines"};
  app.set_version_flag("--version", std::string(metaline_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = -1;
  bool profiles = false;

  const char* commands[][2] = {
      {"modes", "normal modes, density of modes and coupling spectrum"},
      {"dynamics", "single-excitation entropy dynamics"},
      {"renorm", "renormalized splitting against global coupling"},
      {"phase", "phase diagram over splitting and coupling"},
      {"disorder", "band-edge statistics under random cell values"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--threads", threads, "worker threads, 0 for all cores")
        ->check(CLI::NonNegativeNumber);
    if (std::string(name) == "modes") {
      sub->add_flag("--profiles", profiles, "write per-node voltage profiles to modes.csv");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads < 0) {
    if (const char* env = std::getenv("METALINE_THREADS"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (*end != '\0' || v < 0) {
        std::fprintf(stderr, "metaline: METALINE_THREADS must be a non-negative integer\n");
        return 2;
      }
      threads = static_cast<int>(v);
    }
  }

  metaline_config* raw = nullptr;
  if (const auto s = metaline_config_load(config_path.c_str(), &raw); s != METALINE_OK) {
    return report(s);
  }
  const std::unique_ptr<metaline_config, decltype(&metaline_config_free)> config(
      raw, metaline_config_free);

  metaline_run_options options{};
  options.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  options.threads = threads;
  options.profiles = profiles ? 1 : 0;

  const std::string command = app.get_subcommands().front()->get_name();
  char summary[512];
  if (const auto s = metaline_run(config.get(), command.c_str(), &options, summary, sizeof summary);
      s != METALINE_OK) {
    return report(s);
  }
  std::printf("%s: %s\n", command.c_str(), summary);
  return 0;
}

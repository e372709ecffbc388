// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qlcod/qlcod.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

constexpr const char* kModes[] = {"classical-scan", "quantum-steady",  "quantum-sweep",
                                  "wigner-export",  "sde-ensemble",    "entanglement-sweep"};

struct Options {
  std::string config_path;
  std::string out_path;
  unsigned threads = 0;
  bool threads_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int execute(const std::string& mode, const Options& opt) {
  std::ifstream in(opt.config_path, std::ios::binary);
  if (!in) {
    std::cerr << "qlcod: cannot read config " << opt.config_path << "\n";
    return kExitConfig;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  qlcod_config cfg = nullptr;
  if (qlcod_config_parse_for_mode(buf.str().c_str(), mode.c_str(), &cfg) != QLCOD_OK) {
    std::cerr << "qlcod: " << qlcod_last_error() << "\n";
    return kExitConfig;
  }
  struct Guard {
    qlcod_config c;
    ~Guard() { qlcod_config_free(c); }
  } guard{cfg};

  if (opt.seed_set) qlcod_config_set_seed(cfg, opt.seed);
  if (opt.threads_set) qlcod_config_set_threads(cfg, opt.threads);
  if (!opt.out_path.empty()) qlcod_config_set_output(cfg, opt.out_path.c_str());

  qlcod_run_summary summary{};
  const qlcod_status s = qlcod_run(cfg, &summary);
  if (s == QLCOD_ERR_CONFIG) {
    std::cerr << "qlcod: " << qlcod_last_error() << "\n";
    return kExitConfig;
  }
  if (s != QLCOD_OK) {
    std::cerr << "qlcod: " << qlcod_status_string(s) << ": " << qlcod_last_error() << "\n";
    return kExitFailure;
  }
  if (summary.failed > 0)
    std::cerr << "qlcod: " << summary.failed << " of " << summary.points << " points failed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled quantum van der Pol oscillators: steady states, Wigner lobes, entanglement, "
               "classical and noisy-classical sweeps"};
  app.set_version_flag("--version", std::string(qlcod_version()));
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  for (const char* mode : kModes) {
    CLI::App* sub = app.add_subcommand(mode, std::string("Run a ") + mode + " configuration");
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_path, "CSV output path (default: config \"output\", else stdout)");
    sub->add_option_function<unsigned>(
        "--threads", [&](const unsigned& n) { opt.threads = n, opt.threads_set = true; },
        "Worker threads (0: all cores)");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { opt.seed = s, opt.seed_set = true; }, "Override the config seed");
    sub->callback([&chosen, mode] { chosen = mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return execute(chosen, opt);
}

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sarml/scenario.hpp"

namespace {

// --threads wins; SARML_THREADS is the fallback; otherwise the OpenMP default.
int apply_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("SARML_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "configuration error: SARML_THREADS must be a positive integer (got '" << env << "')\n";
        return -1;
      }
      if (n <= 0) {
        std::cerr << "configuration error: SARML_THREADS must be a positive integer (got '" << env << "')\n";
        return -1;
      }
    }
  }
  if (n > 0) omp_set_num_threads(n);
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sarml: monostatic SAR forward model, canonical relation and cancellation toolkit"};
  app.require_subcommand(1);

  std::string config;
  sarml::RunOptions opts;
  std::string out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config, "scenario config (JSON)")->required();
  run->add_flag("--assert", opts.assert_mode, "exit 2 when an acceptance check fails");
  run->add_flag("--svg", opts.svg, "write SVG heat maps");
  run->add_flag("--json", opts.json, "write JSON reports");
  run->add_option("--out", out_dir, "output directory (overrides output_dir)");
  run->add_option("--threads", threads, "OpenMP threads (fallback: SARML_THREADS)")->check(CLI::PositiveNumber);

  auto* selftest = app.add_subcommand("selftest", "run built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (apply_threads(threads) < 0) return 1;
  if (*run) {
    if (!out_dir.empty()) opts.out_dir = out_dir;
    return sarml::run_scenario_file(config, opts, std::cout, std::cerr);
  }
  if (*selftest) return sarml::builtin_selftest(std::cout);
  return 1;
}

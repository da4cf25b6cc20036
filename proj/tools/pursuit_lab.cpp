#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "pursuit_lab.h"

int main(int argc, char** argv) {
  CLI::App app{"Beacon-referenced cyclic pursuit lab"};
  app.require_subcommand(1);

  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;

  const char* modes[][2] = {
      {"simulate", "Full-space simulation"},
      {"shape-sim", "Shape-space simulation with a two-route cross-check"},
      {"equilibria", "Enumerate circling equilibria"},
      {"stability", "Linear stability report at an equilibrium"},
      {"pure-shape", "Pure-shape run on an invariant manifold"},
      {"portrait", "Reduced phase portrait"},
      {"sweep", "Parameter sweep of the stability verdict"},
  };
  for (const auto& [name, help] : modes) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config,-c", config, "Configuration file")->required();
    sub->add_option("--out,-o", out, "Output directory");
    sub->add_option("--seed,-s", seed, "Random seed");
    sub->add_option("--override", overrides, "key=value applied after the file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : PL_ERR_CONFIG;
  }

  const std::string mode = app.get_subcommands().front()->get_name();
  std::vector<const char*> ov;
  for (const auto& o : overrides) ov.push_back(o.c_str());
  const std::uint64_t seed_value = seed.value_or(0);

  const pl_status st = pl_run(mode.c_str(), config.c_str(), out.empty() ? nullptr : out.c_str(),
                              seed ? &seed_value : nullptr, ov.data(), ov.size());
  if (st != PL_OK) {
    std::fprintf(stderr, "pursuit-lab: %s\n", pl_last_error());
    return st;
  }
  return 0;
}

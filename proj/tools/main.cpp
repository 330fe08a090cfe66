#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "badcantor/config.hpp"
#include "badcantor/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bad points on curves: Cantor construction, certificates and oracles"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app = nullptr;
    std::string config;
    std::map<std::string, std::string> flags;
  };
  const char* names[][2] = {
      {"construct", "build the Cantor chain and emit a certificate"},
      {"verify", "recheck a certificate with exact arithmetic"},
      {"oracle", "brute-force quality estimate at a point, or report for a certificate"},
      {"transfer-test", "randomized transference checks"},
      {"lattice-probe", "shortest vectors along the orbit a(t)u(phi(x))Z^{n+1}"},
  };
  std::map<std::string, Sub> subs;
  for (const auto& [name, help] : names) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, help);
    s.app->add_option("-c,--config", s.config, "key = value config file");
    for (const auto& key : badcantor::config_keys()) {
      std::string opt = "--" + std::string(key.name);
      std::string k(key.name);
      s.app->add_option_function<std::string>(
          opt, [&s, k](const std::string& v) { s.flags[k] = v; }, std::string(key.help));
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    badcantor::RunConfig cfg;
    try {
      if (!s.config.empty()) cfg = badcantor::load_config(s.config);
      badcantor::merge_flags(cfg, s.flags);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return badcantor::kExitConfig;
    }
    return badcantor::run(name, cfg, std::cout, std::cerr);
  }
  return badcantor::kExitConfig;
}

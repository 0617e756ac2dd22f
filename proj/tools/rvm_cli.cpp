#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvm/rvm.h"

namespace {

struct ConfigGuard {
  rvm_config* cfg = nullptr;
  ~ConfigGuard() { rvm_config_free(cfg); }
};

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { rvm_string_free(s); }
};

int report(rvm_status rc) {
  if (rc != RVM_OK) std::fprintf(stderr, "error: %s\n", rvm_last_error());
  return static_cast<int>(rc);
}

int load_config(const std::string& path, const std::vector<std::string>& sets,
                const std::string& out_dir, ConfigGuard& guard) {
  rvm_status rc = rvm_config_load(path.c_str(), &guard.cfg);
  if (rc != RVM_OK) return report(rc);
  for (const auto& kv : sets) {
    rc = rvm_config_override(guard.cfg, kv.c_str());
    if (rc != RVM_OK) return report(rc);
  }
  if (!out_dir.empty()) {
    rc = rvm_config_set_output_dir(guard.cfg, out_dir.c_str());
    if (rc != RVM_OK) return report(rc);
  }
  return -1;  // loaded
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1.5D relativistic Vlasov-Maxwell solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, check_dir;
  std::vector<std::string> sets;
  bool quiet = false;

  if (const char* threads = std::getenv("RVM_THREADS"))
    rvm_set_threads(std::atoi(threads));

  auto add_common = [&](CLI::App* cmd, bool need_config) {
    auto* opt = cmd->add_option("--config", config_path, "configuration file");
    if (need_config) opt->required();
    cmd->add_option("--set", sets, "dotted.path=value override (repeatable)");
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_flag("--quiet", quiet, "suppress the summary line");
  };

  CLI::App* run = app.add_subcommand("run", "run the configured solver");
  add_common(run, true);

  CLI::App* constants =
      app.add_subcommand("constants", "print the a-priori constants");
  add_common(constants, true);

  CLI::App* check =
      app.add_subcommand("check", "re-verify a run directory offline");
  check->add_option("dir", check_dir, "run directory");
  add_common(check, false);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    ConfigGuard guard;
    int rc = load_config(config_path, sets, out_dir, guard);
    if (rc >= 0) return rc;
    StringGuard summary;
    rvm_status st = rvm_run(guard.cfg, &summary.s);
    if (st != RVM_OK) return report(st);
    if (!quiet && summary.s) std::printf("%s\n", summary.s);
    return 0;
  }

  if (constants->parsed()) {
    ConfigGuard guard;
    int rc = load_config(config_path, sets, out_dir, guard);
    if (rc >= 0) return rc;
    StringGuard text;
    rvm_status st = rvm_constants_json(guard.cfg, &text.s);
    if (st != RVM_OK) return report(st);
    std::printf("%s\n", text.s);
    return 0;
  }

  // check
  std::string dir = !check_dir.empty() ? check_dir : out_dir;
  if (dir.empty()) {
    std::fprintf(stderr, "error: check needs a run directory\n");
    return static_cast<int>(RVM_IO_ERROR);
  }
  StringGuard rep;
  rvm_status st = rvm_check_directory(dir.c_str(), &rep.s);
  if (st != RVM_OK) return report(st);
  if (!quiet && rep.s) std::printf("%s\n", rep.s);
  return 0;
}

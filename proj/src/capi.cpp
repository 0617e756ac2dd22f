#include "rvm/rvm.h"

#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "rvm/config.hpp"
#include "rvm/constants.hpp"
#include "rvm/driver.hpp"
#include "rvm/errors.hpp"
#include "rvm/io.hpp"
#include "rvm/picard.hpp"

using nlohmann::json;

struct rvm_config {
  rvm::SimConfig cfg;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rvm_status from_status(rvm::StatusCode sc) {
  return static_cast<rvm_status>(static_cast<int>(sc));
}

rvm_status handle_current_exception() {
  try {
    throw;
  } catch (const rvm::ConfigError& e) {
    set_error(e.what());
    return RVM_INVALID_CONFIG;
  } catch (const rvm::IoError& e) {
    set_error(e.what());
    return RVM_IO_ERROR;
  } catch (const rvm::ViolationError& e) {
    set_error(e.what());
    return RVM_RUNTIME_VIOLATION;
  } catch (const rvm::ConfinementError& e) {
    set_error(e.what());
    return RVM_RUNTIME_VIOLATION;
  } catch (const rvm::NonConvergenceError& e) {
    set_error(e.what());
    return RVM_RUNTIME_VIOLATION;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RVM_RUNTIME_VIOLATION;
  } catch (...) {
    set_error("unknown error");
    return RVM_RUNTIME_VIOLATION;
  }
}

}  // namespace

extern "C" {

const char* rvm_version(void) { return "1.0.0"; }

const char* rvm_last_error(void) { return g_last_error.c_str(); }

void rvm_set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

rvm_status rvm_config_load(const char* path, rvm_config** out) {
  if (!path || !out) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  *out = nullptr;
  try {
    std::string text;
    {
      FILE* fp = std::fopen(path, "rb");
      if (!fp) throw rvm::IoError(std::string("cannot open config: ") + path);
      char buf[4096];
      size_t n;
      while ((n = std::fread(buf, 1, sizeof(buf), fp)) > 0)
        text.append(buf, n);
      std::fclose(fp);
    }
    auto* handle = new rvm_config{rvm::parse_config_json(text)};
    *out = handle;
    return RVM_OK;
  } catch (...) {
    return handle_current_exception();
  }
}

rvm_status rvm_config_from_json(const char* text, rvm_config** out) {
  if (!text || !out) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  *out = nullptr;
  try {
    *out = new rvm_config{rvm::parse_config_json(text)};
    return RVM_OK;
  } catch (...) {
    return handle_current_exception();
  }
}

rvm_status rvm_config_override(rvm_config* cfg, const char* assignment) {
  if (!cfg || !assignment) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  try {
    rvm::apply_override(cfg->cfg, assignment);
    return RVM_OK;
  } catch (...) {
    return handle_current_exception();
  }
}

rvm_status rvm_config_set_output_dir(rvm_config* cfg, const char* dir) {
  if (!cfg || !dir) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  cfg->cfg.output.directory = dir;
  return RVM_OK;
}

rvm_status rvm_config_validate(const rvm_config* cfg) {
  if (!cfg) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  try {
    rvm::validate_config(cfg->cfg);
    return RVM_OK;
  } catch (...) {
    return handle_current_exception();
  }
}

rvm_status rvm_config_serialize(const rvm_config* cfg, char** json_out) {
  if (!cfg || !json_out) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  *json_out = dup_string(rvm::serialize_config(cfg->cfg));
  return RVM_OK;
}

void rvm_config_free(rvm_config* cfg) { delete cfg; }

rvm_status rvm_constants_json(const rvm_config* cfg, char** json_out) {
  if (!cfg || !json_out) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  *json_out = nullptr;
  try {
    rvm::validate_config(cfg->cfg);
    rvm::TheoreticalConstants tc = rvm::theoretical_constants(cfg->cfg);
    json c;
    c["f0_l1"] = tc.f0_l1;
    c["f0_rel_l1"] = tc.f0_rel_l1;
    c["f0_sup"] = tc.f0_sup;
    c["e1_bound"] = tc.e1_bound;
    c["C1"] = tc.C1;
    c["C0"] = tc.C0;
    c["C2"] = tc.C2;
    c["R"] = tc.R;
    c["rho_j_bound"] = tc.rho_j_bound;
    c["psi_sup_eps0"] = tc.psi_sup_eps0;
    c["theta0"] = tc.theta0;
    c["theta1"] = tc.theta1;
    *json_out = dup_string(c.dump(2));
    return RVM_OK;
  } catch (...) {
    return handle_current_exception();
  }
}

rvm_status rvm_run(const rvm_config* cfg, char** summary_out) {
  if (!cfg) {
    set_error("null argument");
    return RVM_INVALID_CONFIG;
  }
  if (summary_out) *summary_out = nullptr;
  try {
    const rvm::SimConfig& c = cfg->cfg;
    rvm::validate_config(c);
    rvm::RunRecorder rec;
    rec.stride = c.output.snapshot_stride;
    rec.final_step = c.n_steps();
    rvm::SimulationRun run;
    try {
      run = (c.solver_mode == rvm::SolverMode::Picard)
                ? rvm::run_picard(c, rec.observer())
                : rvm::run_time_marching(c, rec.observer());
    } catch (const rvm::ViolationError& err) {
      rvm::write_failure_artifacts(c, err, c.output.directory);
      throw;
    }
    auto files = rvm::write_run_artifacts(run, rec, c.output.directory);
    if (summary_out) {
      json s;
      s["status"] = "ok";
      s["n_steps"] = run.n_steps();
      s["violations"] = 0;
      s["C1"] = run.constants.C1;
      s["C2"] = run.constants.C2;
      s["theta0"] = run.constants.theta0;
      s["theta1"] = run.constants.theta1;
      s["directory"] = c.output.directory;
      s["files"] = files.size();
      if (!run.picard_residuals.empty())
        s["picard_iterations"] = run.picard_residuals.size();
      *summary_out = dup_string(s.dump());
    }
    return RVM_OK;
  } catch (...) {
    return handle_current_exception();
  }
}

rvm_status rvm_check_directory(const char* dir, char** report_out) {
  if (!dir) {
    set_error("null argument");
    return RVM_IO_ERROR;
  }
  if (report_out) *report_out = nullptr;
  try {
    std::string message;
    rvm::StatusCode sc = rvm::check_run_directory(dir, message);
    if (sc != rvm::StatusCode::Ok) set_error(message);
    if (report_out) *report_out = dup_string(message);
    return from_status(sc);
  } catch (...) {
    return handle_current_exception();
  }
}

void rvm_string_free(char* s) { std::free(s); }

}  // extern "C"

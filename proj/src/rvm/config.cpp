#include "rvm/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rvm/constants.hpp"
#include "rvm/errors.hpp"

namespace rvm {

using nlohmann::json;

// ---------------------------------------------------------------- validation

std::vector<std::string> config_violations(const SimConfig& cfg) {
  std::vector<std::string> out;
  auto bad = [&out](const std::string& m) { out.push_back(m); };

  if (cfg.nx < 8) bad("nx must be >= 8");
  if (cfg.nv < 4) bad("nv must be >= 4");
  if (!(cfg.v_max > 0.0)) bad("v_max must be positive");
  if (!(cfg.t_final > 0.0)) bad("t_final must be positive");
  if (cfg.nx >= 8) {
    double steps = cfg.t_final * cfg.nx;
    if (std::abs(steps - std::lround(steps)) > 1e-9)
      bad("t_final must be an integer multiple of dt = 1/nx");
  }
  if (cfg.lambda < 0.0) bad("lambda must be >= 0");
  if (!(cfg.picard_tol > 0.0)) bad("picard_tol must be positive");
  if (cfg.picard_max_iter < 1) bad("picard_max_iter must be >= 1");
  if (cfg.diag_allowance < 0.0) bad("diag_allowance must be >= 0");
  if (cfg.output.snapshot_stride < 1) bad("output.snapshot_stride must be >= 1");
  if (cfg.output.directory.empty()) bad("output.directory must be non-empty");
  if (!cfg.output.fmt_csv && !cfg.output.fmt_json && !cfg.output.fmt_binary)
    bad("output.formats must contain at least one of csv/json/binary");

  const auto& pot = cfg.potential;
  if (!pot.is_zero()) {
    if (!(pot.c0 > 0.0)) bad("potential.c0 must be positive");
    if (!(pot.gamma >= 1.0)) bad("potential.gamma must be >= 1");
  }
  if (pot.enforce_blowup) {
    if (pot.is_zero()) {
      bad("enforce_blowup requires a non-zero potential");
    } else {
      // Growth condition |psi_ext(x)| >= c0/dist(x)^gamma - 1/c0, sampled
      // toward both walls (holds identically for the reciprocal form).
      for (double x : {1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.45, 0.5,
                       0.55, 0.75, 0.9, 1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4}) {
        if (!pot.blowup_certificate_holds(x)) {
          std::ostringstream os;
          os << "potential violates the blow-up growth condition at x=" << x;
          bad(os.str());
          break;
        }
      }
    }
  }

  const auto& in = cfg.initial_data;
  if (!(in.eps0 > 0.0 && in.eps0 < 0.5)) bad("initial_data.eps0 must lie in (0, 1/2)");
  if (!(in.k0 > 0.0)) bad("initial_data.k0 must be positive");
  if (!in.f0.is_zero()) {
    if (in.f0.amplitude < 0.0) bad("initial_data.f0.amplitude must be >= 0");
    if (!(in.f0.x_radius > 0.0)) bad("initial_data.f0.x_radius must be positive");
    if (!(in.f0.v_radius > 0.0)) bad("initial_data.f0.v_radius must be positive");
    if (in.f0.x_center - in.f0.x_radius < in.eps0 - 1e-12 ||
        in.f0.x_center + in.f0.x_radius > 1.0 - in.eps0 + 1e-12)
      bad("f0 x-support must lie inside [eps0, 1-eps0]");
    if (in.f0.v_radius > in.k0 + 1e-12)
      bad("f0 v-support must lie inside |v| <= k0");
  }
  if (in.k0 > cfg.v_max) bad("v_max must be >= k0");

  // Corner compatibility: initial and boundary field data must agree at the
  // two space-time corners, otherwise the d'Alembert march injects a kink.
  const auto& bdd = cfg.boundary_data;
  auto corner = [&](double a, double b, const char* what) {
    if (std::abs(a - b) > 1e-12) {
      std::ostringstream os;
      os << "corner compatibility violated for " << what << ": |" << a << " - "
         << b << "| > 1e-12";
      bad(os.str());
    }
  };
  corner(in.E2_0(0.0), bdd.E2_b_left(0.0), "E2 at (t,x)=(0,0)");
  corner(in.E2_0(1.0), bdd.E2_b_right(0.0), "E2 at (t,x)=(0,1)");
  corner(in.B_0(0.0), bdd.B_b_left(0.0), "B at (t,x)=(0,0)");
  corner(in.B_0(1.0), bdd.B_b_right(0.0), "B at (t,x)=(0,1)");

  // Velocity grid must cover the a-priori momentum support for the whole run.
  if (out.empty()) {
    TheoreticalConstants tc = theoretical_constants(cfg);
    if (cfg.v_max < tc.R - 1e-12) {
      std::ostringstream os;
      os << "v_max=" << cfg.v_max << " is below the a-priori momentum bound k0+C2*t_final=" << tc.R;
      bad(os.str());
    }
  }
  return out;
}

void validate_config(const SimConfig& cfg) {
  auto v = config_violations(cfg);
  if (!v.empty()) throw ConfigError(std::move(v));
}

// -------------------------------------------------------------------- JSON

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

json analytic_to_json(const AnalyticFn& f) {
  json j;
  j["form"] = form_name(f.form);
  switch (f.form) {
    case AnalyticForm::Zero:
      break;
    case AnalyticForm::Constant:
      j["value"] = f.value;
      break;
    case AnalyticForm::Cosine:
      j["amplitude"] = f.amplitude;
      j["omega"] = f.omega;
      j["phase"] = f.phase;
      break;
    case AnalyticForm::GaussianBump:
      j["amplitude"] = f.amplitude;
      j["center"] = f.center;
      j["width"] = f.width;
      break;
  }
  return j;
}

AnalyticFn analytic_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  AnalyticFn f;
  std::string name = j.value("form", "zero");
  if (!form_from_name(name, f.form))
    throw ConfigError("unknown analytic form '" + name + "' in " + where);
  std::set<std::string> allowed = {"form"};
  switch (f.form) {
    case AnalyticForm::Zero:
      break;
    case AnalyticForm::Constant:
      allowed.insert("value");
      f.value = j.value("value", 0.0);
      break;
    case AnalyticForm::Cosine:
      allowed.insert({"amplitude", "omega", "phase"});
      f.amplitude = j.value("amplitude", 0.0);
      f.omega = j.value("omega", 0.0);
      f.phase = j.value("phase", 0.0);
      break;
    case AnalyticForm::GaussianBump:
      allowed.insert({"amplitude", "center", "width"});
      f.amplitude = j.value("amplitude", 0.0);
      f.center = j.value("center", 0.0);
      f.width = j.value("width", 1.0);
      if (!(f.width > 0.0)) throw ConfigError(where + ".width must be positive");
      break;
  }
  reject_unknown(j, allowed, where);
  return f;
}

json f0_to_json(const F0Spec& f) {
  json j;
  if (f.is_zero()) {
    j["form"] = "zero";
  } else {
    j["form"] = "gaussian_bump";
    j["amplitude"] = f.amplitude;
    j["x_center"] = f.x_center;
    j["x_radius"] = f.x_radius;
    j["v_radius"] = f.v_radius;
  }
  return j;
}

F0Spec f0_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  F0Spec f;
  std::string name = j.value("form", "zero");
  if (name == "zero") {
    reject_unknown(j, {"form"}, where);
    f.zero = true;
    return f;
  }
  if (name != "gaussian_bump")
    throw ConfigError("unknown f0 form '" + name + "' in " + where);
  reject_unknown(j, {"form", "amplitude", "x_center", "x_radius", "v_radius"}, where);
  f.zero = false;
  f.amplitude = j.value("amplitude", 0.0);
  f.x_center = j.value("x_center", 0.5);
  f.x_radius = j.value("x_radius", 0.1);
  f.v_radius = j.value("v_radius", 0.5);
  return f;
}

}  // namespace

SimConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  try {
  reject_unknown(j,
                 {"nx", "nv", "v_max", "t_final", "lambda", "potential",
                  "initial_data", "boundary_data", "solver_mode", "picard_tol",
                  "picard_max_iter", "output", "diag_allowance"},
                 "config");

  SimConfig cfg;
  try {
    cfg.nx = j.value("nx", cfg.nx);
    cfg.nv = j.value("nv", cfg.nv);
    cfg.v_max = j.value("v_max", cfg.v_max);
    cfg.t_final = j.value("t_final", cfg.t_final);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.picard_tol = j.value("picard_tol", cfg.picard_tol);
    cfg.picard_max_iter = j.value("picard_max_iter", cfg.picard_max_iter);
    cfg.diag_allowance = j.value("diag_allowance", cfg.diag_allowance);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad scalar field: ") + e.what());
  }

  if (j.contains("solver_mode")) {
    std::string m = j["solver_mode"].get<std::string>();
    if (m == "march") cfg.solver_mode = SolverMode::March;
    else if (m == "picard") cfg.solver_mode = SolverMode::Picard;
    else throw ConfigError("solver_mode must be 'march' or 'picard'");
  }

  if (j.contains("potential")) {
    const json& p = j["potential"];
    reject_unknown(p, {"form", "c0", "gamma", "enforce_blowup"}, "potential");
    std::string form = p.value("form", "reciprocal");
    if (form == "reciprocal") cfg.potential.form = PotentialForm::Reciprocal;
    else if (form == "zero") cfg.potential.form = PotentialForm::Zero;
    else throw ConfigError("potential.form must be 'reciprocal' or 'zero'");
    cfg.potential.c0 = p.value("c0", 1.0);
    cfg.potential.gamma = p.value("gamma", 1.0);
    cfg.potential.enforce_blowup =
        p.value("enforce_blowup", cfg.potential.form == PotentialForm::Reciprocal);
  }

  if (j.contains("initial_data")) {
    const json& in = j["initial_data"];
    reject_unknown(in, {"f0", "eps0", "k0", "E2_0", "B_0"}, "initial_data");
    if (in.contains("f0")) cfg.initial_data.f0 = f0_from_json(in["f0"], "initial_data.f0");
    cfg.initial_data.eps0 = in.value("eps0", cfg.initial_data.eps0);
    cfg.initial_data.k0 = in.value("k0", cfg.initial_data.k0);
    if (in.contains("E2_0"))
      cfg.initial_data.E2_0 = analytic_from_json(in["E2_0"], "initial_data.E2_0");
    if (in.contains("B_0"))
      cfg.initial_data.B_0 = analytic_from_json(in["B_0"], "initial_data.B_0");
  }

  if (j.contains("boundary_data")) {
    const json& b = j["boundary_data"];
    reject_unknown(b, {"E2_b_left", "E2_b_right", "B_b_left", "B_b_right"},
                   "boundary_data");
    auto& bd = cfg.boundary_data;
    if (b.contains("E2_b_left")) bd.E2_b_left = analytic_from_json(b["E2_b_left"], "boundary_data.E2_b_left");
    if (b.contains("E2_b_right")) bd.E2_b_right = analytic_from_json(b["E2_b_right"], "boundary_data.E2_b_right");
    if (b.contains("B_b_left")) bd.B_b_left = analytic_from_json(b["B_b_left"], "boundary_data.B_b_left");
    if (b.contains("B_b_right")) bd.B_b_right = analytic_from_json(b["B_b_right"], "boundary_data.B_b_right");
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, {"directory", "snapshot_stride", "formats", "emit_trajectories"},
                   "output");
    auto& out = cfg.output;
    out.directory = o.value("directory", out.directory);
    out.snapshot_stride = o.value("snapshot_stride", out.snapshot_stride);
    out.emit_trajectories = o.value("emit_trajectories", out.emit_trajectories);
    if (o.contains("formats")) {
      out.fmt_csv = out.fmt_json = out.fmt_binary = false;
      for (const auto& f : o["formats"]) {
        std::string s = f.get<std::string>();
        if (s == "csv") out.fmt_csv = true;
        else if (s == "json") out.fmt_json = true;
        else if (s == "binary") out.fmt_binary = true;
        else throw ConfigError("unknown output format '" + s + "'");
      }
    }
  }
  return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
}

std::string serialize_config(const SimConfig& cfg) {
  json j;
  j["nx"] = cfg.nx;
  j["nv"] = cfg.nv;
  j["v_max"] = cfg.v_max;
  j["t_final"] = cfg.t_final;
  j["lambda"] = cfg.lambda;
  j["solver_mode"] = cfg.solver_mode == SolverMode::March ? "march" : "picard";
  j["picard_tol"] = cfg.picard_tol;
  j["picard_max_iter"] = cfg.picard_max_iter;
  j["diag_allowance"] = cfg.diag_allowance;
  j["potential"] = {
      {"form", cfg.potential.is_zero() ? "zero" : "reciprocal"},
      {"c0", cfg.potential.c0},
      {"gamma", cfg.potential.gamma},
      {"enforce_blowup", cfg.potential.enforce_blowup},
  };
  j["initial_data"] = {
      {"f0", f0_to_json(cfg.initial_data.f0)},
      {"eps0", cfg.initial_data.eps0},
      {"k0", cfg.initial_data.k0},
      {"E2_0", analytic_to_json(cfg.initial_data.E2_0)},
      {"B_0", analytic_to_json(cfg.initial_data.B_0)},
  };
  j["boundary_data"] = {
      {"E2_b_left", analytic_to_json(cfg.boundary_data.E2_b_left)},
      {"E2_b_right", analytic_to_json(cfg.boundary_data.E2_b_right)},
      {"B_b_left", analytic_to_json(cfg.boundary_data.B_b_left)},
      {"B_b_right", analytic_to_json(cfg.boundary_data.B_b_right)},
  };
  json formats = json::array();
  if (cfg.output.fmt_csv) formats.push_back("csv");
  if (cfg.output.fmt_json) formats.push_back("json");
  if (cfg.output.fmt_binary) formats.push_back("binary");
  j["output"] = {
      {"directory", cfg.output.directory},
      {"snapshot_stride", cfg.output.snapshot_stride},
      {"formats", formats},
      {"emit_trajectories", cfg.output.emit_trajectories},
  };
  return j.dump(2);
}

void apply_override(SimConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like path.to.key=value: " + assignment);
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  json root = json::parse(serialize_config(cfg));
  json* node = &root;
  size_t start = 0;
  std::string leaf;
  while (true) {
    size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("empty key in override path: " + path);
    if (dot == std::string::npos) {
      leaf = key;
      break;
    }
    if (!node->contains(key))
      throw ConfigError("unknown config path '" + path + "'");
    node = &(*node)[key];
    start = dot + 1;
  }
  if (!node->is_object() || !node->contains(leaf))
    throw ConfigError("unknown config path '" + path + "'");

  json parsed;
  if (leaf == "formats") {
    parsed = json::array();
    size_t p = 0;
    while (p <= value.size()) {
      size_t c = value.find(',', p);
      std::string item = value.substr(p, c == std::string::npos ? c : c - p);
      if (!item.empty()) parsed.push_back(item);
      if (c == std::string::npos) break;
      p = c + 1;
    }
  } else {
    // Numbers and booleans parse as JSON scalars; anything else is a string.
    try {
      parsed = json::parse(value);
      if (parsed.is_object() || parsed.is_array() || parsed.is_null())
        parsed = value;
    } catch (...) {
      parsed = value;
    }
  }
  (*node)[leaf] = parsed;
  cfg = parse_config_json(root.dump());
}

}  // namespace rvm

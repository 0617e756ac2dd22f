#include "rvm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rvm/characteristics.hpp"
#include "rvm/constants.hpp"
#include "rvm/diagnostics.hpp"
#include "rvm/sampler.hpp"
#include "rvm/vlasov.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rvm {

std::string fmt17(double v) {
  char buf[48];
  auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fnv1a64_hex(const void* data, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  char buf[16];
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  return std::string(buf, 16);
}

StepObserver RunRecorder::observer() {
  return [this](const SimulationRun&, const DistributionState& f, int m) {
    if (m % std::max(1, stride) != 0 && m != final_step) return;
    if (!steps.empty() && steps.back() == m) return;
    steps.push_back(m);
    f_snaps.push_back(f);
  };
}

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + p.string());
  os << text;
  os.flush();
  if (!os) throw IoError("write failed: " + p.string());
}

std::string step_tag(int m) {
  char b[16];
  std::snprintf(b, sizeof(b), "%06d", m);
  return b;
}

json constants_json(const TheoreticalConstants& tc) {
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
  return c;
}

bool read_file(const fs::path& p, std::string& out) {
  std::ifstream is(p, std::ios::binary);
  if (!is) return false;
  std::ostringstream ss;
  ss << is.rdbuf();
  out = ss.str();
  return bool(is);
}

bool parse_double(const std::string& tok, double& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e;
}

// |a - b| within round-trip noise of the 17-digit text artifacts.
bool close17(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<std::string> write_run_artifacts(const SimulationRun& run,
                                             const RunRecorder& rec,
                                             const std::string& dir) {
  const SimConfig& cfg = run.cfg;
  const PhaseSpaceGrid& g = run.grid;
  fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);

  json files = json::object();
  std::vector<std::string> written;
  auto record = [&](const std::string& name, const std::string& payload,
                    bool checksum) {
    write_text(root / name, payload);
    json e;
    e["bytes"] = payload.size();
    if (checksum) e["fnv1a64"] = fnv1a64_hex(payload.data(), payload.size());
    files[name] = e;
    written.push_back(name);
  };

  {
    std::ostringstream os;
    os << "t,charge,energy,flux_accum,maxf,e1max,e2max,bmax,p_radius,"
          "sigma_lo,sigma_hi,n_violations\n";
    for (const auto& d : run.diagnostics) {
      os << fmt17(d.t) << ',' << fmt17(d.total_charge) << ','
         << fmt17(d.total_energy) << ',' << fmt17(d.boundary_flux_accum) << ','
         << fmt17(d.max_f) << ',' << fmt17(d.e1_max) << ',' << fmt17(d.e2_max)
         << ',' << fmt17(d.b_max) << ',' << fmt17(d.p_radius) << ','
         << fmt17(d.sigma_lo) << ',' << fmt17(d.sigma_hi) << ','
         << d.violations.size() << '\n';
    }
    record("diagnostics.csv", os.str(), false);
  }

  {
    json arr = json::array();
    for (size_t m = 0; m < run.diagnostics.size(); ++m) {
      const auto& d = run.diagnostics[m];
      if (d.violations.empty()) continue;
      json v;
      v["step"] = m;
      v["t"] = d.t;
      json list = json::array();
      for (const auto& [name, margin] : d.violations)
        list.push_back({{"name", name}, {"margin", margin}});
      v["violations"] = list;
      arr.push_back(v);
    }
    record("violations.json", arr.dump(2) + "\n", false);
  }

  for (size_t si = 0; si < rec.steps.size(); ++si) {
    int m = rec.steps[si];
    std::string tag = step_tag(m);
    const FieldState& fsl = run.field_states[m];
    if (cfg.output.fmt_csv) {
      std::ostringstream os;
      os << "x,E1,E2,B\n";
      for (int i = 0; i <= g.nx; ++i)
        os << fmt17(g.x(i)) << ',' << fmt17(fsl.e1[i]) << ','
           << fmt17(fsl.e2(i)) << ',' << fmt17(fsl.b(i)) << '\n';
      record("fields_" + tag + ".csv", os.str(), false);
    }
    if (cfg.output.fmt_json) {
      json jf;
      jf["step"] = m;
      jf["t"] = fsl.t;
      json xs = json::array(), je1 = json::array(), je2 = json::array(),
           jb = json::array();
      for (int i = 0; i <= g.nx; ++i) {
        xs.push_back(g.x(i));
        je1.push_back(fsl.e1[i]);
        je2.push_back(fsl.e2(i));
        jb.push_back(fsl.b(i));
      }
      jf["x"] = std::move(xs);
      jf["E1"] = std::move(je1);
      jf["E2"] = std::move(je2);
      jf["B"] = std::move(jb);
      record("fields_" + tag + ".json", jf.dump(2) + "\n", false);
    }
    if (cfg.output.fmt_binary) {
      const DistributionState& f = rec.f_snaps[si];
      std::string payload(reinterpret_cast<const char*>(f.values.data()),
                          f.values.size() * sizeof(double));
      std::string name = "f_" + tag + ".bin";
      record(name, payload, true);
      json side;
      side["step"] = m;
      side["t"] = f.t;
      side["nx"] = f.nx;
      side["nv"] = f.nv;
      side["v_max"] = g.v_max;
      side["count"] = f.values.size();
      side["max"] = f.max_value;
      side["min"] = f.min_value;
      side["fnv1a64"] = files[name]["fnv1a64"];
      record("f_" + tag + ".json", side.dump(2) + "\n", false);
    }
  }

  if (cfg.output.emit_trajectories) {
    std::ostringstream os;
    os << "traj,s,x,v1,v2,p\n";
    const F0Spec& f0 = cfg.initial_data.f0;
    if (!f0.is_zero() && run.field_states.size() > 1) {
      FieldSampler fields(run.field_states, cfg.potential, g.dt());
      int id = 0;
      for (int sx = -1; sx <= 1; sx += 2)
        for (int s1 = -1; s1 <= 1; s1 += 2)
          for (int s2 = -1; s2 <= 1; s2 += 2) {
            PhasePoint p{f0.x_center + 0.5 * sx * f0.x_radius,
                         0.5 * s1 * f0.v_radius, 0.5 * s2 * f0.v_radius};
            double s = 0.0;
            os << id << ',' << fmt17(s) << ',' << fmt17(p.x) << ','
               << fmt17(p.v1) << ',' << fmt17(p.v2) << ','
               << fmt17(p_invariant(s, p, fields)) << '\n';
            try {
              for (size_t m = 1; m < run.field_states.size(); ++m) {
                double t_m = run.field_states[m].t;
                p = trace(s, p, fields, t_m);
                s = t_m;
                os << id << ',' << fmt17(s) << ',' << fmt17(p.x) << ','
                   << fmt17(p.v1) << ',' << fmt17(p.v2) << ','
                   << fmt17(p_invariant(s, p, fields)) << '\n';
              }
            } catch (const ConfinementError&) {
              // seed left the certified region: truncate this track
            }
            ++id;
          }
    }
    record("trajectories.csv", os.str(), false);
  }

  json man;
  man["artifact"] = "rvm-1.5d";
  man["format_version"] = 1;
  man["status"] = "completed";
  man["solver_mode"] =
      cfg.solver_mode == SolverMode::Picard ? "picard" : "march";
  man["config"] = json::parse(serialize_config(cfg));
  std::string canon = serialize_config(cfg);
  man["config_hash"] = fnv1a64_hex(canon.data(), canon.size());
  man["constants"] = constants_json(run.constants);
  json grid;
  grid["nx"] = g.nx;
  grid["nv"] = g.nv;
  grid["v_max"] = g.v_max;
  grid["dx"] = g.dx;
  grid["dv"] = g.dv;
  grid["dt"] = g.dt();
  man["grid"] = grid;
  man["n_steps"] = run.n_steps();
  man["t_final"] = cfg.t_final;
  man["max_f0"] = run.max_f0_grid;
  man["snapshot_steps"] = rec.steps;
  size_t total_viol = 0;
  for (const auto& d : run.diagnostics) total_viol += d.violations.size();
  man["violations_total"] = total_viol;
  man["passed"] = (total_viol == 0);
  if (!run.picard_residuals.empty())
    man["picard_residuals"] = run.picard_residuals;
  man["files"] = files;
  write_text(root / "manifest.json", man.dump(2) + "\n");
  written.push_back("manifest.json");
  return written;
}

void write_failure_artifacts(const SimConfig& cfg, const ViolationError& err,
                             const std::string& dir) {
  fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
  json man;
  man["artifact"] = "rvm-1.5d";
  man["format_version"] = 1;
  man["status"] = "violated";
  man["failed_step"] = err.step;
  man["config"] = json::parse(serialize_config(cfg));
  std::string canon = serialize_config(cfg);
  man["config_hash"] = fnv1a64_hex(canon.data(), canon.size());
  json list = json::array();
  for (const auto& [name, margin] : err.violations)
    list.push_back({{"name", name}, {"margin", margin}});
  man["violations"] = list;
  write_text(root / "manifest.json", man.dump(2) + "\n");
}

StatusCode check_run_directory(const std::string& dir, std::string& message) {
  fs::path root(dir);
  auto io_fail = [&](const std::string& m) {
    message = m;
    return StatusCode::IoError;
  };
  auto check_fail = [&](const std::string& m) {
    message = m;
    return StatusCode::CheckFailure;
  };

  std::string man_text;
  if (!read_file(root / "manifest.json", man_text))
    return io_fail("missing or unreadable manifest.json");
  json man;
  try {
    man = json::parse(man_text);
  } catch (const json::exception& e) {
    return io_fail(std::string("corrupt manifest.json: ") + e.what());
  }
  if (!man.is_object() || !man.contains("status"))
    return io_fail("manifest.json lacks a status field");
  if (man["status"] != "completed")
    return check_fail("run did not complete: status=" +
                      man["status"].dump());

  SimConfig cfg;
  try {
    cfg = parse_config_json(man.at("config").dump());
  } catch (const std::exception& e) {
    return check_fail(std::string("manifest config rejected: ") + e.what());
  }
  std::string canon = serialize_config(cfg);
  if (man.value("config_hash", std::string()) !=
      fnv1a64_hex(canon.data(), canon.size()))
    return check_fail("config_hash does not match the embedded config");

  // inventory: sizes for every artifact, checksums for binary payloads
  std::string diag_text;
  if (!man.contains("files") || !man["files"].is_object())
    return io_fail("manifest.json lacks the file inventory");
  for (auto it = man["files"].begin(); it != man["files"].end(); ++it) {
    std::string body;
    if (!read_file(root / it.key(), body))
      return io_fail("missing artifact: " + it.key());
    if (body.size() != it.value().value("bytes", size_t(0)))
      return io_fail("size mismatch: " + it.key());
    if (it.value().contains("fnv1a64") &&
        fnv1a64_hex(body.data(), body.size()) != it.value()["fnv1a64"])
      return io_fail("checksum mismatch: " + it.key());
    if (it.key() == "diagnostics.csv") diag_text = std::move(body);
  }
  if (diag_text.empty()) return io_fail("missing artifact: diagnostics.csv");

  TheoreticalConstants tc = theoretical_constants(cfg);
  {
    json stored = man.value("constants", json::object());
    json fresh = constants_json(tc);
    for (auto it = fresh.begin(); it != fresh.end(); ++it) {
      if (!stored.contains(it.key()))
        return check_fail("manifest constants lack " + it.key());
      if (!close17(stored[it.key()].get<double>(), it.value().get<double>()))
        return check_fail("constant mismatch: " + it.key());
    }
  }

  // diagnostics series
  struct Row {
    double col[11];
    long n_violations;
  };
  std::vector<Row> rows;
  {
    std::istringstream is(diag_text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,charge,", 0) != 0)
      return io_fail("diagnostics.csv header malformed");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      Row r{};
      std::istringstream ls(line);
      std::string tok;
      int c = 0;
      bool ok = true;
      while (std::getline(ls, tok, ',')) {
        if (c < 11)
          ok = ok && parse_double(tok, r.col[c]);
        else if (c == 11) {
          double nv = 0;
          ok = ok && parse_double(tok, nv) && nv >= 0 &&
               nv == std::floor(nv);
          r.n_violations = long(nv);
        } else
          ok = false;
        ++c;
      }
      if (!ok || c != 12)
        return io_fail("diagnostics.csv row malformed: " + line);
      rows.push_back(r);
    }
  }
  int n_steps = man.value("n_steps", -1);
  if (n_steps < 0 || int(rows.size()) != n_steps + 1)
    return check_fail("diagnostics.csv row count does not match n_steps");

  long viol_total = 0;
  for (const auto& r : rows) viol_total += r.n_violations;
  if (viol_total != long(man.value("violations_total", size_t(0))))
    return check_fail("violations_total does not match diagnostics.csv");
  if (man.value("passed", false) != (viol_total == 0))
    return check_fail("passed flag does not match the violation count");

  // skeleton run carrying the stored series; snapshots are re-derived
  SimulationRun skel;
  skel.cfg = cfg;
  skel.grid = PhaseSpaceGrid(cfg.nx, cfg.nv, cfg.v_max);
  skel.tables = VelocityTables(skel.grid);
  skel.constants = tc;
  if (!man.contains("max_f0")) return check_fail("manifest lacks max_f0");
  skel.max_f0_grid = man["max_f0"].get<double>();
  skel.field_states.resize(n_steps + 1);
  skel.current_history.resize(n_steps + 1);
  skel.total_energy.resize(n_steps + 1);
  skel.flux_accum.resize(n_steps + 1);
  for (int m = 0; m <= n_steps; ++m) {
    skel.total_energy[m] = rows[m].col[2];
    skel.flux_accum[m] = rows[m].col[3];
  }
  DiagnosticsReport d0;
  d0.total_charge = rows[0].col[1];
  skel.diagnostics.push_back(d0);
  const PhaseSpaceGrid& g = skel.grid;

  std::vector<int> snaps = man.value("snapshot_steps", std::vector<int>());
  bool any_full = false;
  for (int m : snaps) {
    if (m < 0 || m > n_steps) return check_fail("snapshot step out of range");
    std::string tag = step_tag(m);
    const Row& row = rows[m];

    // fields snapshot
    FieldState fsr;
    if (cfg.output.fmt_csv || cfg.output.fmt_json) {
      fsr.t = row.col[0];
      fsr.e1.resize(g.nx + 1);
      fsr.k_plus.resize(g.nx + 1);
      fsr.k_minus.resize(g.nx + 1);
      if (cfg.output.fmt_csv) {
        std::string body;
        if (!read_file(root / ("fields_" + tag + ".csv"), body))
          return io_fail("missing artifact: fields_" + tag + ".csv");
        std::istringstream is(body);
        std::string line;
        std::getline(is, line);
        for (int i = 0; i <= g.nx; ++i) {
          if (!std::getline(is, line))
            return io_fail("fields_" + tag + ".csv truncated");
          double c[4];
          std::istringstream ls(line);
          std::string tok;
          for (int c4 = 0; c4 < 4; ++c4) {
            if (!std::getline(ls, tok, ',') || !parse_double(tok, c[c4]))
              return io_fail("fields_" + tag + ".csv row malformed");
          }
          if (!close17(c[0], g.x(i)))
            return check_fail("fields_" + tag + ".csv x column mismatch");
          fsr.e1[i] = c[1];
          fsr.k_plus[i] = c[2] + c[3];
          fsr.k_minus[i] = c[2] - c[3];
        }
      } else {
        std::string body;
        if (!read_file(root / ("fields_" + tag + ".json"), body))
          return io_fail("missing artifact: fields_" + tag + ".json");
        json jf;
        try {
          jf = json::parse(body);
        } catch (const json::exception& e) {
          return io_fail("corrupt fields_" + tag + ".json: " + e.what());
        }
        auto e1 = jf.value("E1", std::vector<double>());
        auto e2 = jf.value("E2", std::vector<double>());
        auto b = jf.value("B", std::vector<double>());
        if (int(e1.size()) != g.nx + 1 || int(e2.size()) != g.nx + 1 ||
            int(b.size()) != g.nx + 1)
          return io_fail("fields_" + tag + ".json truncated");
        for (int i = 0; i <= g.nx; ++i) {
          fsr.e1[i] = e1[i];
          fsr.k_plus[i] = e2[i] + b[i];
          fsr.k_minus[i] = e2[i] - b[i];
        }
      }
    }

    if (!cfg.output.fmt_binary) continue;  // cannot re-derive without f

    std::string payload;
    if (!read_file(root / ("f_" + tag + ".bin"), payload))
      return io_fail("missing artifact: f_" + tag + ".bin");
    size_t count = size_t(g.nx + 1) * (g.nv + 1) * (g.nv + 1);
    if (payload.size() != count * sizeof(double))
      return io_fail("f_" + tag + ".bin has the wrong size");
    DistributionState f;
    f.t = row.col[0];
    f.nx = g.nx;
    f.nv = g.nv;
    f.values.resize(count);
    std::memcpy(f.values.data(), payload.data(), payload.size());
    refresh_support(f, g);

    std::string side_text;
    if (!read_file(root / ("f_" + tag + ".json"), side_text))
      return io_fail("missing artifact: f_" + tag + ".json");
    json side;
    try {
      side = json::parse(side_text);
    } catch (const json::exception& e) {
      return io_fail("corrupt f_" + tag + ".json: " + e.what());
    }
    if (!close17(side.value("t", -1.0), row.col[0]))
      return check_fail("snapshot time mismatch at step " + std::to_string(m));
    if (!close17(side.value("max", -1.0), f.max_value) ||
        !close17(side.value("min", -1.0), f.min_value))
      return check_fail("f_" + tag + ".json extrema mismatch");

    if (!(cfg.output.fmt_csv || cfg.output.fmt_json)) continue;

    // recompute the full report for this level
    skel.field_states[m] = fsr;
    skel.current_history[m] = moments(f, g, skel.tables);
    std::vector<double> e_dens, m_dens;
    energy_density(fsr, f, g, skel.tables, e_dens, m_dens);
    double energy = integrate_x(e_dens, g.dx);
    if (!close17(energy, row.col[2]))
      return check_fail("energy mismatch at step " + std::to_string(m));

    DiagnosticsReport rep = check_all(skel, m, f);
    struct Col {
      int idx;
      double val;
      const char* name;
    } cols[] = {{1, rep.total_charge, "charge"}, {4, rep.max_f, "maxf"},
                {5, rep.e1_max, "e1max"},        {6, rep.e2_max, "e2max"},
                {7, rep.b_max, "bmax"},          {8, rep.p_radius, "p_radius"},
                {9, rep.sigma_lo, "sigma_lo"},   {10, rep.sigma_hi, "sigma_hi"}};
    for (const auto& c : cols) {
      if (!close17(c.val, row.col[c.idx]))
        return check_fail(std::string(c.name) + " mismatch at step " +
                          std::to_string(m));
    }
    if (long(rep.violations.size()) != row.n_violations)
      return check_fail("n_violations mismatch at step " + std::to_string(m));
    any_full = true;
  }

  std::ostringstream os;
  os << "ok: " << rows.size() << " diagnostic rows, " << snaps.size()
     << " snapshots verified";
  if (!any_full) os << " (inventory only)";
  message = os.str();
  return StatusCode::Ok;
}

}  // namespace rvm

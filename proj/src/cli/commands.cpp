#include "necrosim/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "necrosim/errors.hpp"
#include "necrosim/evolution.hpp"
#include "necrosim/linearization.hpp"
#include "necrosim/verify.hpp"

namespace necrosim::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Raised when psi0 sits on the critical constant; maps to exit code 2.
class CriticalPsi0 : public Error {
 public:
  using Error::Error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quad_str(const quad& v) { return v.str(34, std::ios_base::scientific); }

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

struct ResolvedBio {
  BioParams bio;
  std::optional<StationaryResult> stationary;
};

ResolvedBio resolve_bio(const RunConfig& c) {
  if (!c.derive_stationary) return {{c.A, c.G, c.psi0}, std::nullopt};
  const StationaryResult st = solve_stationary(c.geometry, c.psi0);
  if (!st.solvable) {
    throw CriticalPsi0("psi0 = " + num(c.psi0) + " is critical (psi0c = " + num(st.psi0_critical) +
                       "); no stationary (A, G) exists");
  }
  return {st.bio(c.psi0), st};
}

DiscretizationParams discretization(const RunConfig& c) {
  DiscretizationParams p;
  p.modes = c.modes;
  p.radial_points = c.radial_points;
  p.scheme = c.scheme;
  return p;
}

InterfacePair initial_interfaces(const RunConfig& c) {
  InterfacePair rho = InterfacePair::zero(c.modes);
  rho.amplitude_bound = c.amplitude_bound;
  for (const SeedSpec& s : c.seeds) rho[s.interface - 1] += FourierSeries::cosine(c.modes, s.mode, s.amplitude, s.phase);
  return rho;
}

json stationary_report(const RunConfig& c, const StationaryResult& st) {
  const GeometryParams& g = c.geometry;
  const StationaryCoefficients k = stationarity_coefficients(g, quad(c.psi0));
  const CriticalConstantParts parts = psi0_critical_parts(g);
  const G0Certificate cert = g0_nonexistence_certificate(g.R1, 500);
  json j = {
      {"R1", g.R1},
      {"R2", g.R2},
      {"psi0", c.psi0},
      {"solvable", st.solvable},
      {"psi0_critical", st.psi0_critical},
      {"psi0_critical_parts", {{"numerator", static_cast<double>(parts.numerator)}, {"denominator", static_cast<double>(parts.denominator)}}},
      {"coefficients",
       {{"a1", static_cast<double>(k.a1)}, {"a2", static_cast<double>(k.a2)}, {"b1", static_cast<double>(k.b1)},
        {"b2", static_cast<double>(k.b2)}, {"c1", static_cast<double>(k.c1)}, {"c2", static_cast<double>(k.c2)},
        {"a1b2_minus_a2b1", static_cast<double>(k.det_ab())}, {"c1b2_minus_c2b1", static_cast<double>(k.det_cb())}}},
      {"bine_residual", bine_residual(g.R1, g.R2)},
      {"g0_certificate",
       {{"R1", cert.R1}, {"samples", cert.samples}, {"g_at_R1", cert.g_at_R1}, {"max_g_prime", cert.max_g_prime},
        {"min_margin", cert.min_margin}, {"certified", cert.certified}}},
  };
  if (st.solvable) {
    j["A"] = static_cast<double>(st.A);
    j["G"] = static_cast<double>(st.G);
    j["A_quad"] = quad_str(st.A);
    j["G_quad"] = quad_str(st.G);
    j["residuals"] = {st.residuals[0], st.residuals[1]};
  }
  return j;
}

void write_coefficients(std::ostream& f, const EvolutionState& s) {
  for (int i = 0; i < 2; ++i) {
    const FourierSeries& rho = s.interfaces[i];
    for (int m = 0; m <= rho.max_mode(); ++m) {
      f << num(s.time) << ',' << i + 1 << ',' << m << ',' << num(rho[m].real()) << ',' << num(rho[m].imag()) << '\n';
    }
  }
}

void write_samples(std::ostream& f, const EvolutionState& s, const GeometryParams& g, int samples) {
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int i = 0; i < 2; ++i) {
    const double R = i == 0 ? g.R1 : g.R2;
    for (int j = 0; j < samples; ++j) {
      const double theta = two_pi * j / samples;
      const double rho = s.interfaces[i].evaluate(theta);
      f << num(s.time) << ',' << i + 1 << ',' << num(theta) << ',' << num(rho) << ',' << num(R * (1 + rho)) << '\n';
    }
  }
}

struct RunSummary {
  Termination termination = Termination::kCompleted;
  std::string message;
  double max_drift = 0.0;
  double final_time = 0.0;
};

/// Runs one trajectory and writes coefficients.csv, samples.csv, decay.csv and manifest.json into dir.
RunSummary run_trajectory(const RunConfig& c, const ResolvedBio& rb, const fs::path& dir) {
  const PhiModel model(c.geometry, discretization(c), rb.bio);
  EvolveOptions opt;
  opt.t_end = c.t_end;
  opt.dt = c.dt;
  opt.output_every = c.output_every;

  std::ofstream coeffs = open_output(dir / "coefficients.csv");
  std::ofstream samples = open_output(dir / "samples.csv");
  coeffs << "t,interface,m,re,im\n";
  samples << "t,interface,theta,rho,radius\n";
  const int n_samples = std::max(64, 4 * c.modes);
  const Trajectory traj = evolve(model, initial_interfaces(c), opt, [&](const EvolutionState& s) {
    write_coefficients(coeffs, s);
    write_samples(samples, s, c.geometry, n_samples);
  });

  std::set<int> seeded;
  for (const SeedSpec& s : c.seeds) {
    if (s.mode >= 1) seeded.insert(s.mode);
  }
  std::ofstream decay = open_output(dir / "decay.csv");
  decay << "m,measured_rate,principal_eigenvalue,full_eigenvalue,ratio_to_full\n";
  json decay_json = json::array();
  for (int m : seeded) {
    const double rate = mode_decay_rate(traj, m, 0.0, traj.final_time);
    const ModeSymbol sym = linearized_symbol(model, m);
    const double principal = sym.eigenvalues[0].real();
    const double full = sym.dominant_eigenvalue().real();
    decay << m << ',' << num(rate) << ',' << num(principal) << ',' << num(full) << ',' << num(rate / full) << '\n';
    decay_json.push_back({{"mode", m},
                          {"measured_rate", std::isfinite(rate) ? json(rate) : json(nullptr)},
                          {"principal_eigenvalue", principal},
                          {"full_eigenvalue", full}});
  }

  json manifest = {
      {"config", json::parse(to_json_string(c))},
      {"bio", {{"A", rb.bio.A}, {"G", rb.bio.G}, {"psi0", rb.bio.psi0}, {"derived_stationary", rb.stationary.has_value()}}},
      {"reason", to_string(traj.termination)},
      {"message", traj.message},
      {"final_time", traj.final_time},
      {"steps", traj.steps},
      {"rejected_steps", traj.rejected},
      {"snapshots", traj.snapshots.size()},
      {"max_drift", traj.max_drift},
      {"decay", decay_json},
  };
  open_output(dir / "manifest.json") << manifest.dump(2) << '\n';
  return {traj.termination, traj.message, traj.max_drift, traj.final_time};
}

int termination_code(Termination t) {
  switch (t) {
    case Termination::kCompleted:
    case Termination::kInterfaceCollision: return kExitOk;
    default: return kExitNumerical;
  }
}

}  // namespace

int cmd_stationary(const RunConfig& c, const CommandContext& ctx) {
  const StationaryResult st = solve_stationary(c.geometry, c.psi0);
  const json report = stationary_report(c, st);
  ctx.out << report.dump(2) << '\n';
  if (ctx.write_files) open_output(fs::path(c.output_dir) / "stationary.json") << report.dump(2) << '\n';
  if (!st.solvable) {
    ctx.err << "psi0 is critical for this geometry: no stationary annulus\n";
    return kExitCritical;
  }
  return kExitOk;
}

int cmd_spectrum(const RunConfig& c, const CommandContext& ctx) {
  const SpectrumScan scan = spectrum_scan(c.geometry, c.m_max);
  std::ostringstream csv;
  csv << "m,A11,A12,A21,A22,lambda1_re,lambda1_im,lambda2_re,lambda2_im\n";
  for (const ModeSymbol& s : scan.symbols) {
    const auto& a = s.matrix;
    csv << s.mode << ',' << num(a(0, 0)) << ',' << num(a(0, 1)) << ',' << num(a(1, 0)) << ',' << num(a(1, 1)) << ','
        << num(s.eigenvalues[0].real()) << ',' << num(s.eigenvalues[0].imag()) << ',' << num(s.eigenvalues[1].real())
        << ',' << num(s.eigenvalues[1].imag()) << '\n';
  }
  ctx.out << csv.str();
  if (ctx.write_files) open_output(fs::path(c.output_dir) / "spectrum.csv") << csv.str();
  return kExitOk;
}

int cmd_evolve(const RunConfig& c, const CommandContext& ctx) {
  const ResolvedBio rb = resolve_bio(c);
  const RunSummary s = run_trajectory(c, rb, c.output_dir);
  ctx.out << "reason=" << to_string(s.termination) << " final_time=" << num(s.final_time)
          << " max_drift=" << num(s.max_drift) << " output=" << c.output_dir << '\n';
  if (s.termination != Termination::kCompleted) ctx.err << s.message << '\n';
  return termination_code(s.termination);
}

int cmd_verify(const RunConfig& c, const CommandContext& ctx) {
  VerifyOptions opt;
  opt.geometry = c.geometry;
  opt.psi0 = c.psi0;
  opt.modes = c.modes;
  opt.radial_points = c.radial_points;
  opt.perturb_bessel_k = ctx.bessel_fault;
  const VerificationReport report = run_verification(opt);
  json checks = json::array();
  for (const CheckResult& r : report.checks) {
    ctx.out << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << num(r.measured)
            << " tolerance=" << num(r.tolerance);
    if (!r.detail.empty()) ctx.out << " (" << r.detail << ')';
    ctx.out << '\n';
    checks.push_back(
        {{"name", r.name}, {"measured", r.measured}, {"tolerance", r.tolerance}, {"passed", r.passed}, {"detail", r.detail}});
  }
  ctx.out << (report.all_passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
  if (ctx.write_files) {
    open_output(fs::path(c.output_dir) / "verify.json")
        << json{{"all_passed", report.all_passed()}, {"checks", checks}}.dump(2) << '\n';
  }
  return report.all_passed() ? kExitOk : kExitVerify;
}

int cmd_sweep(const RunConfig& c, const CommandContext& ctx) {
  if (c.sweep_psi0.empty()) throw ConfigError("sweep needs at least one psi0 value (sweep.psi0 or --psi0-list)");
  struct Row {
    double psi0;
    bool solvable;
    double A, G;
    std::string reason;
    double max_drift;
  };
  std::vector<std::future<Row>> runs;
  for (std::size_t k = 0; k < c.sweep_psi0.size(); ++k) {
    runs.push_back(std::async(std::launch::async, [&c, k] {
      RunConfig rc = c;
      rc.psi0 = c.sweep_psi0[k];
      Row row{rc.psi0, false, 0.0, 0.0, "Critical", 0.0};
      ResolvedBio rb;
      try {
        rb = resolve_bio(rc);
      } catch (const CriticalPsi0&) {
        return row;
      }
      row.solvable = true;
      row.A = rb.bio.A;
      row.G = rb.bio.G;
      const RunSummary s = run_trajectory(rc, rb, fs::path(c.output_dir) / ("run_" + std::to_string(k)));
      row.reason = to_string(s.termination);
      row.max_drift = s.max_drift;
      return row;
    }));
  }
  std::ostringstream csv;
  csv << "run,psi0,solvable,A,G,reason,max_drift\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Row r = runs[k].get();
    csv << k << ',' << num(r.psi0) << ',' << (r.solvable ? 1 : 0) << ',' << num(r.A) << ',' << num(r.G) << ','
        << r.reason << ',' << num(r.max_drift) << '\n';
  }
  ctx.out << csv.str();
  open_output(fs::path(c.output_dir) / "sweep.csv") << csv.str();
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-interface necrotic tumour moving-boundary solver", "necrosim"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, out_dir, scheme, psi0_list;
  std::optional<double> r1, r2, psi0, a, g, t_end, dt, output_every, amplitude_bound;
  std::optional<int> modes, nr, m_max;
  std::vector<std::string> seeds;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--r1", r1, "outer reference radius R1");
    sub->add_option("--r2", r2, "inner reference radius R2");
    sub->add_option("--psi0", psi0, "necrotic nutrient offset psi0");
    sub->add_option("--a", a, "apoptosis constant A (with --g; disables stationary derivation)");
    sub->add_option("--g", g, "vascularisation constant G (with --a)");
    sub->add_option("--modes", modes, "angular truncation M");
    sub->add_option("--nr", nr, "radial points");
    sub->add_option("--scheme", scheme, "radial scheme: chebyshev or fd2");
    sub->add_option("--t-end", t_end, "final time");
    sub->add_option("--dt", dt, "initial time step");
    sub->add_option("--output-every", output_every, "snapshot spacing in time (0: every step)");
    sub->add_option("--seed", seeds, "perturbation interface:mode:amplitude[:phase]");
    sub->add_option("--amplitude-bound", amplitude_bound, "admissibility constant a");
    sub->add_option("--m-max", m_max, "largest mode for spectrum");
    sub->add_option("--psi0-list", psi0_list, "comma separated psi0 values for sweep");
    sub->add_option("--out", out_dir, "output directory");
  };
  CLI::App* stationary = app.add_subcommand("stationary", "stationary annulus (A, G), critical psi0, G = 0 certificate");
  CLI::App* spectrum = app.add_subcommand("spectrum", "principal symbols and eigenvalues per mode as CSV");
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "integrate the interface evolution and write trajectories");
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  CLI::App* sweep = app.add_subcommand("sweep", "concurrent evolve runs over a list of psi0 values");
  for (CLI::App* sub : {stationary, spectrum, evolve_cmd, verify, sweep}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig c = config_path ? load_config(*config_path) : RunConfig{};
    if (r1) c.geometry.R1 = *r1;
    if (r2) c.geometry.R2 = *r2;
    if (psi0) c.psi0 = *psi0;
    if (a || g) {
      if (c.derive_stationary && !(a && g)) throw ConfigError("--a and --g must be given together");
      c.derive_stationary = false;
      if (a) c.A = *a;
      if (g) c.G = *g;
    }
    if (modes) c.modes = *modes;
    if (nr) c.radial_points = *nr;
    if (scheme) {
      if (*scheme == "chebyshev") c.scheme = RadialScheme::kChebyshev;
      else if (*scheme == "fd2") c.scheme = RadialScheme::kFiniteDifference;
      else throw ConfigError("--scheme must be chebyshev or fd2");
    }
    if (t_end) c.t_end = *t_end;
    if (dt) c.dt = *dt;
    if (output_every) c.output_every = *output_every;
    if (!seeds.empty()) {
      c.seeds.clear();
      for (const std::string& s : seeds) c.seeds.push_back(parse_seed(s));
    }
    if (amplitude_bound) c.amplitude_bound = *amplitude_bound;
    if (m_max) c.m_max = *m_max;
    if (psi0_list) {
      c.sweep_psi0.clear();
      std::stringstream ss(*psi0_list);
      for (std::string item; std::getline(ss, item, ',');) {
        try {
          c.sweep_psi0.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw ConfigError("--psi0-list must be comma separated numbers");
        }
      }
    }
    if (out_dir) c.output_dir = *out_dir;
    c.validate();

    const char* fault = std::getenv("NECROSIM_FAULT");
    const CommandContext ctx{out, err, out_dir.has_value(), fault != nullptr && std::string(fault) == "bessel"};
    if (stationary->parsed()) return cmd_stationary(c, ctx);
    if (spectrum->parsed()) return cmd_spectrum(c, ctx);
    if (evolve_cmd->parsed()) return cmd_evolve(c, ctx);
    if (verify->parsed()) return cmd_verify(c, ctx);
    return cmd_sweep(c, ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegenerateAnnulus& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CriticalPsi0& e) {
    err << "critical: " << e.what() << '\n';
    return kExitCritical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace necrosim::cli

// Batch front end: dispatches the experiment subcommands, reads the flat
// key = value configuration (with ISOLAB_* environment overrides), and writes
// CSV tables plus JSON summaries under the output directory.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <string>

#include "isolab/acceptance.hpp"
#include "isolab/bray.hpp"
#include "isolab/cmc.hpp"
#include "isolab/curvature.hpp"
#include "isolab/io.hpp"
#include "isolab/iso_mass.hpp"
#include "isolab/mass_center.hpp"
#include "isolab/metric.hpp"
#include "isolab/numerics.hpp"
#include "isolab/parallel.hpp"
#include "isolab/quasilocal.hpp"
#include "isolab/spectrum.hpp"

namespace {

using isolab::Config;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct Context {
  Config config;
  std::string out_dir;
  int threads = 1;
};

void write_summary(const Context& ctx, const std::string& command, const json& summary) {
  std::filesystem::create_directories(ctx.out_dir);
  const std::string path = ctx.out_dir + "/" + command + "_summary.json";
  std::ofstream os(path);
  os << summary.dump(2) << '\n';
  std::cout << "wrote " << path << '\n';
}

isolab::ManifoldSpec spec_from(const Context& ctx) {
  return isolab::manifold_from_config(ctx.config);
}

std::vector<double> ladder_from(const Context& ctx, const std::string& key,
                                const std::vector<double>& fallback) {
  return ctx.config.get_list(key, fallback);
}

int cmd_report_geometry(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const isolab::MetricField metric(spec);
  const std::vector<double> radii = ladder_from(ctx, "ladder.radii", {2.0, 5.0, 10.0, 50.0, 100.0});
  std::vector<std::vector<double>> rows;
  for (double r : radii) {
    isolab::VecN x{};
    x[0] = r;
    const isolab::CurvatureSample sample =
        metric.pure_schwarzschild()
            ? isolab::curvature_schwarzschild_closed(spec, x)
            : isolab::curvature_finite_difference(metric, x);
    isolab::MetricJet jet;
    metric.eval(x, jet);
    double rc_rad = sample.ricci.a[0][0] / jet.g[0][0];
    rows.push_back({r, jet.g[0][0], sample.scalar, rc_rad,
                    isolab::tensor4_max_abs(sample.rm, spec.n)});
  }
  isolab::write_csv_file(ctx.out_dir + "/geometry.csv",
                         {"r", "g_rr", "scalar_curvature", "ricci_radial_over_g", "rm_max"}, rows);
  json summary;
  summary["command"] = "report-geometry";
  summary["n"] = spec.n;
  summary["m"] = spec.m;
  summary["rows"] = rows.size();
  write_summary(ctx, "report-geometry", summary);
  return kExitOk;
}

int cmd_hawking_profile(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const std::string kind = ctx.config.get("hawking.profile", "schwarzschild");
  const double a = ctx.config.get_double("hawking.a", 1.1);
  const double b = ctx.config.get_double("hawking.b", 100.0);
  isolab::RotProfile profile;
  if (kind == "schwarzschild") {
    profile = isolab::schwarzschild_rot_profile(spec, a, b);
  } else if (kind == "euclidean") {
    profile = isolab::euclidean_rot_profile(spec.n, a, b);
  } else if (kind == "cone") {
    const double r_match = ctx.config.get_double("hawking.match_radius", 5.0);
    const isolab::MatchingResult mc = isolab::solve_matching(spec.m, spec.n, r_match);
    profile = isolab::cone_rot_profile(spec.n, mc.alpha, a, b);
  } else if (kind == "user") {
    std::ifstream is(ctx.config.get("hawking.table", ""));
    if (!is) throw std::runtime_error("hawking-profile: cannot open hawking.table");
    profile = isolab::read_rot_profile(is, spec.n);
  } else {
    throw std::invalid_argument("hawking-profile: unknown profile kind " + kind);
  }
  profile.verify();
  std::vector<double> radii = ladder_from(ctx, "ladder.radii", {});
  if (radii.empty())
    for (int i = 0; i <= 32; ++i) radii.push_back(a + (b - a) * (i + 0.5) / 34.0);
  const isolab::HawkingProfileResult result = isolab::hawking_profile(profile, radii);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < radii.size(); ++i)
    rows.push_back({radii[i], result.masses[i]});
  isolab::write_csv_file(ctx.out_dir + "/hawking_profile.csv", {"r", "mass"}, rows);
  {
    std::ofstream table(ctx.out_dir + "/hawking_profile.dat");
    isolab::write_rot_profile(table, profile, radii);
  }
  json summary = isolab::json_of(result);
  summary["command"] = "hawking-profile";
  summary["profile"] = kind;
  summary["monotone"] = result.max_violation <= 0.0;
  write_summary(ctx, "hawking-profile", summary);
  return result.max_violation <= 1e-10 ? kExitOk : kExitNumerical;
}

int cmd_bray_chart(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const double r = ctx.config.get_double("bray.r", 100.0);
  const double s_max_factor = ctx.config.get_double("bray.s_max_factor", 1e3);
  const isolab::ChartSolution chart = isolab::build_chart(spec.m, spec.n, r, s_max_factor);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < chart.s.size(); ++i) rows.push_back({chart.s[i], chart.u[i]});
  isolab::write_csv_file(ctx.out_dir + "/bray_chart.csv", {"s", "u"}, rows);
  {
    std::ofstream table(ctx.out_dir + "/bray_chart.dat");
    isolab::write_chart(table, chart);
  }
  const isolab::ChartDiagnostics diag = isolab::validate_chart(chart);
  json summary = isolab::json_of(chart);
  summary["command"] = "bray-chart";
  summary["u_at_c_error"] = diag.u_at_c_error;
  summary["monotonicity_violation"] = diag.monotonicity_violation;
  summary["u_at_smax_gap"] = diag.u_at_smax_gap;
  summary["sandwich_violation"] = diag.sandwich_violation;
  write_summary(ctx, "bray-chart", summary);
  const bool ok = diag.u_at_c_error < 1e-10 && diag.monotonicity_violation < 1e-10 &&
                  diag.sandwich_violation < 1e-10;
  return ok ? kExitOk : kExitNumerical;
}

int cmd_volume_comparison(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const std::vector<double> radii = ladder_from(ctx, "ladder.radii", {50.0, 100.0, 200.0});
  const std::vector<double> taus = ladder_from(ctx, "ladder.taus", {1.25, 1.5, 2.0});
  const double offset_factor = ctx.config.get_double("comparison.offset_factor", 1.5);
  struct Case {
    double r, tau;
  };
  std::vector<Case> cases;
  for (double r : radii)
    for (double tau : taus) cases.push_back({r, tau});
  std::vector<isolab::OffCenterCheck> checks(cases.size());
  isolab::parallel_for(0, static_cast<int>(cases.size()), ctx.threads, [&](int i) {
    checks[i] =
        isolab::effective_deficit(spec.m, spec.n, cases[i].r, offset_factor * cases[i].r,
                                  cases[i].tau);
  });
  std::vector<std::vector<double>> rows;
  bool all_positive = true;
  double min_ratio = 1e300;
  for (const auto& c : checks) {
    rows.push_back({c.r, c.tau, c.p_norm, c.r_prime, c.area_boundary, c.area_sphere, c.deficit,
                    c.eta, c.ratio});
    all_positive = all_positive && c.deficit > 0.0;
    min_ratio = std::min(min_ratio, c.ratio);
  }
  isolab::write_csv_file(
      ctx.out_dir + "/volume_comparison.csv",
      {"r", "tau", "p", "r_prime", "area_boundary", "area_sphere", "deficit", "eta", "ratio"},
      rows);
  json summary;
  summary["command"] = "volume-comparison";
  summary["all_deficits_positive"] = all_positive;
  summary["empirical_constant_lower_bound"] = min_ratio;
  write_summary(ctx, "volume-comparison", summary);
  return all_positive ? kExitOk : kExitNumerical;
}

std::shared_ptr<isolab::SphereGrid> grid_from(const Context& ctx,
                                              const isolab::ManifoldSpec& spec) {
  const std::string mode = ctx.config.get("grid.mode", spec.n == 3 ? "full" : "axisymmetric");
  if (mode == "full") {
    return std::make_shared<isolab::SphereGrid>(isolab::SphereGrid::full(
        ctx.config.get_int("grid.theta", 48), ctx.config.get_int("grid.phi", 96),
        ctx.config.get_int("grid.lmax", 20)));
  }
  return std::make_shared<isolab::SphereGrid>(isolab::SphereGrid::axisymmetric(
      spec.n, ctx.config.get_int("grid.nodes", 256), ctx.config.get_int("grid.lmax", 48)));
}

int cmd_cmc_solve(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const isolab::MetricField metric(spec);
  isolab::ManifoldSpec bare = spec;
  bare.perturbation = isolab::PerturbationSpec{};
  bare.translation = isolab::VecN{};
  const double R = ctx.config.get_double("cmc.R", 50.0);
  const double Ht = spec.m > 0.0 ? isolab::sphere_mean_curvature_schwarzschild(bare, R)
                                 : (spec.n - 1.0) / R;
  auto grid = grid_from(ctx, spec);
  const int seed_l = ctx.config.get_int("cmc.seed_l", 2);
  const double seed_amp = ctx.config.get_double("cmc.seed_amp", 0.0);
  isolab::NewtonReport rep;
  isolab::GraphSurface surface = isolab::newton_solve_cmc(
      grid, metric, R, Ht, isolab::harmonic_seed(*grid, seed_l, seed_amp), &rep);
  std::vector<std::vector<double>> rows;
  for (int p = 0; p < surface.nodes(); ++p)
    rows.push_back({surface.grid->theta(p), surface.grid->phi(p), surface.ufields.f[p]});
  isolab::write_csv_file(ctx.out_dir + "/cmc_surface.csv", {"theta", "phi", "u"}, rows);
  json summary = isolab::json_of(rep);
  summary["command"] = "cmc-solve";
  summary["R"] = R;
  summary["H_target"] = Ht;
  summary["n"] = spec.n;
  summary["m"] = spec.m;
  summary["gamma"] = spec.gamma;
  summary["perturbation_sigma"] = spec.perturbation.sigma;
  summary["perturbation_pattern"] = spec.perturbation.empty() ? -1 : spec.perturbation.pattern;
  write_summary(ctx, "cmc-solve", summary);
  return rep.converged ? kExitOk : kExitNumerical;
}

int cmd_jacobi_spectrum(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const isolab::MetricField metric(spec);
  const double R = ctx.config.get_double("cmc.R", 100.0);
  auto grid = grid_from(ctx, spec);
  std::vector<double> zero(grid->basis_size(), 0.0);
  isolab::GraphSurface surface = isolab::build_surface(grid, metric, R, zero);
  const bool cross = ctx.config.get_int("spectrum.cross_check", 0) != 0;
  const isolab::SpectrumReport rep =
      isolab::jacobi_spectrum(surface, ctx.config.get_int("spectrum.count", 6), cross);
  json summary = isolab::json_of(rep);
  summary["command"] = "jacobi-spectrum";
  summary["R"] = R;
  write_summary(ctx, "jacobi-spectrum", summary);
  return kExitOk;
}

int cmd_foliation_sweep(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const isolab::MetricField metric(spec);
  isolab::ManifoldSpec bare = spec;
  bare.perturbation = isolab::PerturbationSpec{};
  bare.translation = isolab::VecN{};
  const isolab::MetricField background(bare);
  const std::vector<double> radii = ladder_from(ctx, "ladder.radii", {50.0, 100.0, 200.0});
  const isolab::ComConvergenceReport rep = isolab::com_convergence_experiment(
      metric, background, radii, ctx.config.get_int("grid.nodes", 192),
      ctx.config.get_int("grid.lmax", 48), ctx.config.get_int("grid.theta", 48),
      ctx.config.get_int("grid.phi", 96), ctx.config.get_int("grid.full_lmax", 20));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < radii.size(); ++i)
    rows.push_back({radii[i], rep.centroids[i][0], rep.leaf_norms[i], rep.gaps[i]});
  isolab::write_csv_file(ctx.out_dir + "/foliation_sweep.csv",
                         {"R", "centroid_x", "leaf_norm", "gap"}, rows);
  json summary = isolab::json_of(rep, spec.n);
  summary["command"] = "foliation-sweep";
  write_summary(ctx, "foliation-sweep", summary);
  return rep.completed ? kExitOk : kExitNumerical;
}

int cmd_center_of_mass(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  const isolab::MetricField metric(spec);
  const std::vector<double> radii =
      ladder_from(ctx, "ladder.radii", {100.0, 316.22776601683796, 1000.0});
  const isolab::CenterReport rep = isolab::adm_center(metric, radii);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<double> row = {radii[i]};
    for (int k = 0; k < spec.n; ++k) row.push_back(rep.partials[i][k]);
    rows.push_back(row);
  }
  std::vector<std::string> cols = {"r"};
  for (int k = 0; k < spec.n; ++k) cols.push_back("partial_" + std::to_string(k));
  isolab::write_csv_file(ctx.out_dir + "/center_ladder.csv", cols, rows);
  json summary = isolab::json_of(rep, spec.n);
  summary["command"] = "center-of-mass";
  write_summary(ctx, "center-of-mass", summary);
  if (rep.evenness_warning)
    std::cout << "warning: metric is not asymptotically even; the limit may not exist\n";
  return kExitOk;
}

int cmd_iso_mass(const Context& ctx) {
  const isolab::ManifoldSpec spec = spec_from(ctx);
  if (spec.n != 3) throw std::invalid_argument("iso-mass: defined for n = 3 only");
  const isolab::MetricField metric(spec);
  const std::vector<double> radii =
      ladder_from(ctx, "ladder.radii", {100.0, 316.22776601683796, 1000.0});
  const isolab::MassEstimate plain = isolab::iso_mass_exhaustion(metric, radii);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < radii.size(); ++i) rows.push_back({radii[i], plain.quasi_mass[i]});
  isolab::write_csv_file(ctx.out_dir + "/iso_mass_ladder.csv", {"r", "quasi_mass"}, rows);
  json summary = isolab::json_of(plain);
  summary["command"] = "iso-mass";
  if (spec.pure_schwarzschild() && spec.translation == isolab::VecN{} && spec.m > 0.0) {
    std::vector<double> volumes;
    isolab::ManifoldSpec bare = spec;
    for (double r : radii)
      volumes.push_back(
          isolab::schwarzschild_annulus_volume(bare, isolab::horizon_radius(bare), r));
    const isolab::MassEstimate modified =
        isolab::modified_iso_mass(isolab::schwarzschild_profile(spec.m, 3, volumes));
    summary["modified"] = isolab::json_of(modified);
  }
  write_summary(ctx, "iso-mass", summary);
  return kExitOk;
}

int cmd_acceptance(const Context& ctx) {
  isolab::AcceptanceOptions opt;
  opt.threads = ctx.threads;
  const std::vector<isolab::CriterionResult> results = isolab::run_acceptance(opt);
  json summary;
  summary["command"] = "acceptance";
  int failures = 0;
  std::vector<std::vector<double>> rows;
  for (const auto& r : results) {
    std::cout << isolab::format_result_line(r) << '\n';
    json jr;
    jr["id"] = r.id;
    jr["name"] = r.name;
    jr["passed"] = r.passed;
    jr["seconds"] = r.seconds;
    for (const auto& [key, value] : r.metrics) jr["metrics"][key] = value;
    summary["criteria"].push_back(jr);
    // timing stays out of the CSV so repeated runs are byte-identical
    std::vector<double> row = {static_cast<double>(r.id), r.passed ? 1.0 : 0.0};
    for (const auto& [key, value] : r.metrics) row.push_back(value);
    while (row.size() < 6) row.push_back(0.0);
    row.resize(6);
    rows.push_back(row);
    if (!r.passed) ++failures;
  }
  summary["failures"] = failures;
  isolab::write_csv_file(ctx.out_dir + "/acceptance.csv",
                         {"criterion", "passed", "metric_0", "metric_1", "metric_2", "metric_3"},
                         rows);
  write_summary(ctx, "acceptance", summary);
  return failures == 0 ? kExitOk : kExitNumerical;
}

int cmd_validate(const Context& ctx) {
  const std::vector<std::string> diagnostics = isolab::validate_config(ctx.config);
  bool hard_error = false;
  for (const auto& d : diagnostics) {
    std::cout << d << '\n';
    if (d.rfind("error:", 0) == 0) hard_error = true;
  }
  if (diagnostics.empty()) std::cout << "configuration OK\n";
  return hard_error ? kExitConfig : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for isoperimetry in asymptotically Schwarzschild spaces"};
  std::string config_path, out_dir = "out", subcommand_flag;
  int threads = 1;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for parameter sweeps");
  app.add_option("--subcommand", subcommand_flag, "subcommand name (alternative to positional)");
  std::string positional;
  app.add_option("command", positional,
                 "report-geometry | hawking-profile | bray-chart | volume-comparison | cmc-solve "
                 "| jacobi-spectrum | foliation-sweep | center-of-mass | iso-mass | acceptance | "
                 "validate");
  CLI11_PARSE(app, argc, argv);

  Context ctx;
  ctx.out_dir = out_dir;
  ctx.threads = threads;
  try {
    if (!config_path.empty()) ctx.config = Config::from_file(config_path);
    ctx.config.apply_environment();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string command = !positional.empty() ? positional : subcommand_flag;
  if (command.empty()) command = ctx.config.get("command", "");
  if (command.empty()) {
    std::cerr << "no subcommand given (positional, --subcommand, or command= in the config)\n";
    return kExitConfig;
  }
  ctx.config.set("command", command);

  // schema validation gates every run
  {
    const std::vector<std::string> diagnostics = isolab::validate_config(ctx.config);
    for (const auto& d : diagnostics) {
      std::cerr << d << '\n';
      if (d.rfind("error:", 0) == 0) return kExitConfig;
    }
  }

  try {
    std::filesystem::create_directories(ctx.out_dir);
    if (command == "report-geometry") return cmd_report_geometry(ctx);
    if (command == "hawking-profile") return cmd_hawking_profile(ctx);
    if (command == "bray-chart") return cmd_bray_chart(ctx);
    if (command == "volume-comparison") return cmd_volume_comparison(ctx);
    if (command == "cmc-solve") return cmd_cmc_solve(ctx);
    if (command == "jacobi-spectrum") return cmd_jacobi_spectrum(ctx);
    if (command == "foliation-sweep") return cmd_foliation_sweep(ctx);
    if (command == "center-of-mass") return cmd_center_of_mass(ctx);
    if (command == "iso-mass") return cmd_iso_mass(ctx);
    if (command == "acceptance") return cmd_acceptance(ctx);
    if (command == "validate") return cmd_validate(ctx);
    std::cerr << "unknown subcommand: " << command << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    json record;
    record["failure"] = e.what();
    record["command"] = command;
    write_summary(ctx, command + "_failure", record);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    json record;
    record["failure"] = e.what();
    record["command"] = command;
    write_summary(ctx, command + "_failure", record);
    return kExitNumerical;
  }
}

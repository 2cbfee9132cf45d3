#include "fracmax/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "fracmax/io.hpp"
#include "fracmax/principles.hpp"
#include "fracmax/special.hpp"
#include "fracmax/timefrac.hpp"

namespace fracmax::cli {

namespace {

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json config_echo(const RunConfig& c) {
  return {{"alpha", c.alpha}, {"beta", c.beta}, {"a", c.a},   {"b", c.b},           {"n", c.n},
          {"T", c.T},         {"M", c.M},       {"u0", c.u0_src}, {"f", c.f_src},   {"m", c.m},
          {"trials", c.trials}, {"seed", c.seed}};
}

TrialSpec trial_spec(const RunConfig& c, ReportKind kind) {
  TrialSpec s;
  s.kind = kind;
  s.trials = c.trials;
  s.seed = c.seed;
  s.lattice = TrialSpec::default_lattice();
  s.a = c.a;
  s.b = c.b;
  s.n = c.n;
  s.horizon = c.T;
  s.steps = std::max(c.M, 1);
  return s;
}

/// ψ = (1 - ξ²)₊ on the middle half of the domain.
Field bump(const SpaceGrid& g) {
  const double mid = 0.5 * (g.a + g.b), half = 0.25 * (g.b - g.a);
  return Field::sample(g, [&](double x) {
    const double xi = (x - mid) / half;
    return std::max(0.0, 1.0 - xi * xi);
  });
}

nlohmann::json suite_nonneg(const RunConfig& c, bool& pass) {
  const PrincipleReport trials = run_trials(trial_spec(c, ReportKind::nonneg));
  const ProblemSpec p = c.problem();
  const PrincipleReport own = check_nonnegativity(solve(p), positivity_tolerance(p));
  pass = pass && trials.passed() && own.passed();
  return {{"trials", trials.to_json()}, {"config", own.to_json()}};
}

nlohmann::json suite_boundary(const RunConfig& c, bool& pass) {
  const PrincipleReport lo = run_trials(trial_spec(c, ReportKind::boundary_min));
  const PrincipleReport hi = run_trials(trial_spec(c, ReportKind::boundary_max));
  const ProblemSpec p = c.problem();
  const Solution sol = solve(p);
  const PrincipleReport own_lo = check_parabolic_boundary(sol, Extremum::min, positivity_tolerance(p));
  const PrincipleReport own_hi = check_parabolic_boundary(sol, Extremum::max, positivity_tolerance(p));
  pass = pass && lo.passed() && hi.passed() && own_lo.passed() && own_hi.passed();
  return {{"trials_min", lo.to_json()},
          {"trials_max", hi.to_json()},
          {"config_min", own_lo.to_json()},
          {"config_max", own_hi.to_json()}};
}

nlohmann::json suite_weak(const RunConfig& c, bool& pass) {
  const PrincipleReport trials = run_trials(trial_spec(c, ReportKind::weak_nonneg));
  pass = pass && trials.passed();
  nlohmann::json out{{"trials", trials.to_json()}};
  if (c.M >= 1) {
    const Solution sol = solve(c.problem());
    const std::vector<double> r = weak_residual_profile(sol, bump(c.grid()), c.m);
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    out["residual"] = {{"m", c.m},
                       {"max_abs", worst},
                       {"final", r.back()},
                       {"l1_time", weak_residual_l1(sol, bump(c.grid()), c.m)}};
  }
  return out;
}

nlohmann::json suite_identities(const RunConfig& c, bool& pass) {
  const TimeMesh mesh{c.T, std::max(c.M, 2)};
  const std::vector<double> alphas{0.3, 0.5, 0.7, 0.9};
  std::vector<int> ms{4};
  if (c.m != 4) ms.push_back(c.m);
  std::map<std::pair<double, int>, TimeSeries> kernels;
  for (double a : alphas)
    for (int m : ms) kernels.emplace(std::pair{a, m}, regularized_kernel(a, m, mesh));

  std::size_t checked = 0, failed = 0, sign_checked = 0, sign_failed = 0;
  double worst_slack = 0.0, worst_identity = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const double alpha = alphas[t % alphas.size()];
    const TimeSeries u = random_spline_trajectory(mesh, trial_seed(c.seed, t));
    for (int m : ms) {
      const TimeSeries& k = kernels.at({alpha, m});
      for (const auto& v : convex_inequality_check(u, k)) {
        ++checked;
        if (!v.all_ok()) ++failed;
        worst_slack = std::min({worst_slack, v.positive_slack, v.negated_slack, -v.negative_slack});
      }
      worst_identity = std::max(worst_identity, std::abs(fundamental_identity_residual(
                                                    u, ConvexProbe::half_square(), k, mesh.steps)));
    }
    for (Extremum mode : {Extremum::max, Extremum::min}) {
      const auto it = mode == Extremum::max ? std::max_element(u.values.begin(), u.values.end())
                                            : std::min_element(u.values.begin(), u.values.end());
      const std::size_t n0 = static_cast<std::size_t>(it - u.values.begin());
      if (n0 == 0) continue;
      ++sign_checked;
      if (!rl_extremum_sign(u, alpha, n0, mode).pass) ++sign_failed;
    }
  }
  pass = pass && failed == 0 && sign_failed == 0;
  return {{"inequalities", {{"checked", checked}, {"failed", failed}, {"worst_slack", worst_slack}}},
          {"extremum_sign", {{"checked", sign_checked}, {"failed", sign_failed}}},
          {"identity_residual_max", worst_identity},
          {"m", ms},
          {"trials", c.trials}};
}

struct Row {
  std::string study;
  int resolution;
  double error;
};

void append_rows(std::string& csv, const std::vector<Row>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string order;
    if (i > 0 && rows[i].error > 0.0 && rows[i - 1].error > 0.0) {
      const double ratio = static_cast<double>(rows[i].resolution) / rows[i - 1].resolution;
      order = format_real(std::log(rows[i - 1].error / rows[i].error) / std::log(ratio));
    }
    csv += fmt::format("{},{},{},{}\n", rows[i].study, rows[i].resolution, format_real(rows[i].error), order);
  }
}

}  // namespace

std::string solution_csv(const Solution& sol) {
  std::ostringstream os;
  write_solution_csv(sol, os);
  return os.str();
}

nlohmann::json solution_metadata(const RunConfig& cfg, const Solution& sol) {
  double lo = 0.0, hi = 0.0;
  for (const auto& s : sol.states) {
    if (s.size()) {
      lo = std::min(lo, s.minCoeff());
      hi = std::max(hi, s.maxCoeff());
    }
  }
  return {{"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"grid", {{"a", cfg.a}, {"b", cfg.b}, {"n", cfg.n}, {"h", cfg.grid().h()}}},
          {"mesh", {{"T", cfg.T}, {"M", cfg.M}, {"tau", cfg.M ? cfg.mesh().tau() : 0.0}}},
          {"u0", cfg.u0_src},
          {"f", cfg.f_src},
          {"min", lo},
          {"max", hi},
          {"config_sha256", cfg.sha256}};
}

nlohmann::json verify_report(const RunConfig& cfg, std::string_view suite) {
  static const std::vector<std::string> kSuites{"nonneg", "boundary", "weak", "identities"};
  std::vector<std::string> chosen;
  if (suite == "all") {
    chosen = kSuites;
  } else if (std::find(kSuites.begin(), kSuites.end(), suite) != kSuites.end()) {
    chosen = {std::string(suite)};
  } else {
    throw ContractError(fmt::format("--suite: unknown suite '{}' (nonneg, boundary, weak, identities, all)", suite));
  }
  nlohmann::json suites = nlohmann::json::object();
  bool all = true;
  for (const auto& name : chosen) {
    bool ok = true;
    nlohmann::json body;
    if (name == "nonneg") body = suite_nonneg(cfg, ok);
    else if (name == "boundary") body = suite_boundary(cfg, ok);
    else if (name == "weak") body = suite_weak(cfg, ok);
    else body = suite_identities(cfg, ok);
    body["pass"] = ok;
    suites[name] = body;
    all = all && ok;
  }
  return {{"config", config_echo(cfg)}, {"config_sha256", cfg.sha256}, {"suites", suites}, {"pass", all}};
}

std::string convergence_csv(const RunConfig& cfg) {
  std::string csv = "study,resolution,error,order\n";
  const int M0 = std::max(cfg.M, 8);

  std::vector<Row> rows;
  for (int M = M0; M <= 8 * M0; M *= 2) {
    const TimeMesh mesh{cfg.T, M};
    const TimeSeries u = sample([](double t) { return t * t; }, mesh);
    const CaputoScheme scheme(cfg.alpha, mesh.tau(), CaputoKind::l1, mesh.size());
    const double exact = 2.0 * std::pow(cfg.T, 2.0 - cfg.alpha) / std::tgamma(3.0 - cfg.alpha);
    rows.push_back({"caputo_l1", M, std::abs(caputo_apply(u, scheme, M) - exact)});
  }
  append_rows(csv, rows);

  rows.clear();
  const double getoor = std::tgamma(2.0 * cfg.beta + 1.0);
  for (int n = std::max(cfg.n, 16); n <= 4 * std::max(cfg.n, 16); n *= 2) {
    const SpaceGrid g{-1.0, 1.0, n};
    const Field u = Field::sample(g, [&](double x) { return std::pow(1.0 - x * x, cfg.beta); });
    const Field Au = apply(assemble_1d(g, cfg.beta), u);
    double err = 0.0;
    for (int i = 1; i <= n; ++i)
      if (std::abs(g.x(i)) <= 0.5) err = std::max(err, std::abs(Au.values[i - 1] - getoor));
    rows.push_back({"getoor", n, err});
  }
  append_rows(csv, rows);

  rows.clear();
  const double ml = mittag_leffler(cfg.alpha, -std::pow(cfg.T, cfg.alpha));
  for (int M = M0; M <= 8 * M0; M *= 2) {
    const std::vector<double> u = relax_scalar(cfg.alpha, 1.0, 1.0, TimeMesh{cfg.T, M});
    rows.push_back({"mittag_leffler", M, std::abs(u.back() - ml) / std::abs(ml)});
  }
  append_rows(csv, rows);

  rows.clear();
  RunConfig level = cfg;
  level.M = std::max(cfg.M, 4);
  level.n = std::max(cfg.n, 4);
  for (int k = 0; k < 3; ++k) {
    const Solution sol = solve(level.problem());
    rows.push_back({"weak_residual", level.M, weak_residual_l1(sol, bump(level.grid()), cfg.m)});
    level.M *= 2;
    level.n = 2 * level.n + 1;
  }
  append_rows(csv, rows);
  return csv;
}

std::vector<int> kernel_ladder(int m) {
  if (m < 4) return {m};
  std::vector<int> out;
  for (long k = 4; k <= m; k *= 4) out.push_back(static_cast<int>(k));
  return out;
}

std::string kernel_table_csv(const RunConfig& cfg) {
  const TimeMesh mesh{cfg.T, std::max(cfg.M, 1)};
  std::string csv = "m,t,g,g_m,h_m\n";
  for (int m : kernel_ladder(cfg.m)) {
    const RegularizedKernel k(cfg.alpha, m);
    for (int n = 1; n <= mesh.steps; ++n) {
      const double t = mesh.t(n);
      csv += fmt::format("{},{},{},{},{}\n", m, format_real(t), format_real(g_kernel(1.0 - cfg.alpha, t)),
                         format_real(k.kernel(t)), format_real(k.mollifier(t)));
    }
  }
  return csv;
}

std::string kernel_l1_csv(const RunConfig& cfg) {
  std::string csv = "m,l1_distance\n";
  for (int m : kernel_ladder(cfg.m))
    csv += fmt::format("{},{}\n", m, format_real(l1_distance_to_power_kernel(cfg.alpha, m, cfg.T)));
  return csv;
}

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out) {
  const Solution sol = solve(cfg.problem());
  const std::string csv = solution_csv(sol);
  const std::string meta = dump(solution_metadata(cfg, sol));
  write_text_file(out / "solution.csv", csv);
  write_text_file(out / "solution.json", meta);
  return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::string_view suite, const std::filesystem::path& out) {
  const nlohmann::json report = verify_report(cfg, suite);
  write_text_file(out / "verify.json", dump(report));
  return report.at("pass").get<bool>() ? exit_ok : exit_violation;
}

int cmd_convergence(const RunConfig& cfg, const std::filesystem::path& out) {
  write_text_file(out / "convergence.csv", convergence_csv(cfg));
  return exit_ok;
}

int cmd_kernel_table(const RunConfig& cfg, const std::filesystem::path& out) {
  const std::string table = kernel_table_csv(cfg);
  const std::string l1 = kernel_l1_csv(cfg);
  write_text_file(out / "kernel_table.csv", table);
  write_text_file(out / "kernel_l1.csv", l1);
  return exit_ok;
}

int run(std::string_view command, const std::filesystem::path& config, std::string_view suite,
        const std::string& out_override, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config);
    const std::filesystem::path out = out_override.empty() ? cfg.output : out_override;
    if (command != "verify" && suite != "all") {
      err << "error: --suite only applies to verify\n";
      return exit_usage;
    }
    if (command == "solve") return cmd_solve(cfg, out);
    if (command == "verify") return cmd_verify(cfg, suite, out);
    if (command == "convergence") return cmd_convergence(cfg, out);
    if (command == "kernel-table") return cmd_kernel_table(cfg, out);
    err << "error: unknown command '" << command << "'\n";
    return exit_usage;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "config error: " << p << "\n";
    return exit_usage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  }
}

}  // namespace fracmax::cli

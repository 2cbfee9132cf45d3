#include "fracmax/principles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fracmax/errors.hpp"

namespace fracmax {

std::string_view to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::interior: return "interior";
    case BoundaryClass::lateral: return "lateral";
    case BoundaryClass::initial: return "initial";
    case BoundaryClass::terminal: return "terminal";
  }
  return "?";
}

std::string_view to_string(ReportKind k) {
  switch (k) {
    case ReportKind::nonneg: return "nonneg";
    case ReportKind::boundary_max: return "boundary-max";
    case ReportKind::boundary_min: return "boundary-min";
    case ReportKind::weak_nonneg: return "weak-nonneg";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::not_applicable: return "n/a";
  }
  return "?";
}

bool on_parabolic_boundary(BoundaryClass c) {
  return c == BoundaryClass::initial || c == BoundaryClass::lateral;
}

BoundaryClass classify(const SpaceGrid& grid, const TimeMesh& mesh, int i, int n) {
  if (i < 0 || i > grid.n + 1 || n < 0 || n > mesh.steps) {
    throw ContractError("classify: index (" + std::to_string(i) + ", " + std::to_string(n) +
                        ") out of range");
  }
  if (n == 0) return BoundaryClass::initial;
  if (i <= 1 || i >= grid.n) return BoundaryClass::lateral;
  return n == mesh.steps ? BoundaryClass::terminal : BoundaryClass::interior;
}

nlohmann::json PrincipleReport::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["outcome"] = to_string(outcome);
  j["worst"] = {{"value", extremal}, {"violation", violation}, {"tolerance", tolerance}};
  j["location"] = {{"i", location.i}, {"n", location.n}, {"class", to_string(location_class)}};
  j["trials"] = trials;
  j["seeds"] = seeds;
  nlohmann::json lat = nlohmann::json::array();
  for (const auto& [alpha, beta] : lattice) lat.push_back({alpha, beta});
  j["lattice"] = lat;
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace {

int severity(Outcome o) {
  switch (o) {
    case Outcome::fail: return 2;
    case Outcome::pass: return 1;
    case Outcome::not_applicable: return 0;
  }
  return 0;
}

}  // namespace

PrincipleReport merge(PrincipleReport a, const PrincipleReport& b) {
  const int sa = severity(a.outcome), sb = severity(b.outcome);
  const bool take_b = sb > sa || (sb == sa && b.violation > a.violation);
  PrincipleReport out = take_b ? b : a;
  out.trials = a.trials + b.trials;
  out.seeds = a.seeds;
  out.seeds.insert(out.seeds.end(), b.seeds.begin(), b.seeds.end());
  out.lattice = a.lattice;
  for (const auto& p : b.lattice) {
    if (std::find(out.lattice.begin(), out.lattice.end(), p) == out.lattice.end()) out.lattice.push_back(p);
  }
  if (out.note.empty()) out.note = a.note.empty() ? b.note : a.note;
  return out;
}

double positivity_tolerance(const ProblemSpec& problem) {
  const double u0 = problem.u0.values.size() ? problem.u0.values.cwiseAbs().maxCoeff() : 0.0;
  const Eigen::MatrixXd f = problem.sample_forcing();
  const double fmax = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  return 1e-12 * std::max({1.0, u0, fmax});
}

namespace {

PrincipleReport base_report(const Solution& sol, ReportKind kind, double tol) {
  PrincipleReport r;
  r.kind = kind;
  r.tolerance = tol;
  r.lattice = {{sol.problem.orders.alpha, sol.problem.orders.beta}};
  return r;
}

}  // namespace

PrincipleReport check_nonnegativity(const Solution& sol, double tol, ReportKind kind) {
  PrincipleReport r = base_report(sol, kind, tol);
  const ProblemSpec& p = sol.problem;
  if ((p.u0.values.array() < 0.0).any() || (p.sample_forcing().array() < 0.0).any()) {
    r.outcome = Outcome::not_applicable;
    r.note = "hypotheses violated: u0 >= 0 and f >= 0 required";
    return r;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int n = 0; n < static_cast<int>(sol.states.size()); ++n) {
    const Eigen::VectorXd& s = sol.states[n];
    for (int i = 0; i < s.size(); ++i) {
      if (s[i] < best) {
        best = s[i];
        r.location = {i + 1, n};
      }
    }
  }
  r.extremal = best;
  r.location_class = classify(p.grid, p.mesh, r.location.i, r.location.n);
  r.violation = std::max(0.0, -best);
  r.outcome = best >= -tol ? Outcome::pass : Outcome::fail;
  return r;
}

PrincipleReport check_parabolic_boundary(const Solution& sol, Extremum sign, double tol) {
  const ReportKind kind = sign == Extremum::min ? ReportKind::boundary_min : ReportKind::boundary_max;
  PrincipleReport r = base_report(sol, kind, tol);
  const ProblemSpec& p = sol.problem;
  const Eigen::MatrixXd f = p.sample_forcing();
  const bool hyp = sign == Extremum::min ? (f.array() >= 0.0).all() : (f.array() <= 0.0).all();
  if (!hyp) {
    r.outcome = Outcome::not_applicable;
    r.note = sign == Extremum::min ? "hypotheses violated: f >= 0 required"
                                   : "hypotheses violated: f <= 0 required";
    return r;
  }
  // Work with s·u so both modes become a minimum search.
  const double s = sign == Extremum::min ? 1.0 : -1.0;
  const int M = static_cast<int>(sol.states.size()) - 1;
  const TimeMesh& mesh = p.mesh;
  double bnd = std::numeric_limits<double>::infinity();
  double inner = std::numeric_limits<double>::infinity();
  NodeIndex bnd_at, inner_at;
  for (int n = 0; n <= M; ++n) {
    for (int i = 0; i <= p.grid.n + 1; ++i) {
      const double v = (i == 0 || i == p.grid.n + 1) ? 0.0 : s * sol.states[n][i - 1];
      if (on_parabolic_boundary(classify(p.grid, mesh, i, n))) {
        if (v < bnd) { bnd = v; bnd_at = {i, n}; }
      } else if (v < inner) {
        inner = v;
        inner_at = {i, n};
      }
    }
  }
  const bool boundary_wins = bnd <= inner;
  r.location = boundary_wins ? bnd_at : inner_at;
  r.location_class = classify(p.grid, mesh, r.location.i, r.location.n);
  r.extremal = s * std::min(bnd, inner);
  r.violation = std::max(0.0, bnd - inner);
  r.outcome = boundary_wins && r.violation <= tol ? Outcome::pass : Outcome::fail;
  return r;
}

std::vector<std::pair<double, double>> TrialSpec::default_lattice() {
  std::vector<std::pair<double, double>> out;
  for (double alpha : {0.3, 0.5, 0.7, 0.9})
    for (double beta : {0.3, 0.5, 0.7, 0.9}) out.emplace_back(alpha, beta);
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

namespace {

struct SineSum {
  double amp[5], freq[5], phase[5];

  double operator()(double xi) const {
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += amp[k] * std::sin(freq[k] * std::numbers::pi * xi + phase[k]);
    return acc;
  }
};

SineSum random_sines(std::mt19937_64& rng, bool vanish_at_edges) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> freq(1, 8);
  SineSum s{};
  for (int k = 0; k < 5; ++k) {
    s.amp[k] = amp(rng);
    s.freq[k] = freq(rng);
    s.phase[k] = vanish_at_edges ? 0.0 : phase(rng);
  }
  return s;
}

}  // namespace

TrialData random_trial_data(ReportKind kind, const SpaceGrid& grid, double horizon,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SineSum us = random_sines(rng, true);
  const SineSum fx = random_sines(rng, false);
  const SineSum ft = random_sines(rng, false);
  const double a = grid.a, len = grid.b - grid.a;
  // nonneg kinds clip u0 at zero; boundary kinds keep both signs in u0.
  const bool clip_u0 = kind == ReportKind::nonneg || kind == ReportKind::weak_nonneg;
  const double fsign = kind == ReportKind::boundary_max ? -1.0 : 1.0;
  Field u0 = Field::sample(grid, [&](double x) {
    const double v = us((x - a) / len);
    return clip_u0 ? std::max(0.0, v) : v;
  });
  Forcing f = [fx, ft, a, len, horizon, fsign](double x, double t) {
    return fsign * std::max(0.0, fx((x - a) / len) + 0.5 * ft(t / horizon));
  };
  return {std::move(u0), std::move(f)};
}

TimeSeries random_spline_trajectory(const TimeMesh& mesh, std::uint64_t seed, int knots) {
  if (knots < 1) throw ContractError("random_spline_trajectory: knots must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> y(knots + 1);
  for (double& v : y) v = unit(rng);
  auto at = [&](int k) { return y[std::clamp(k, 0, knots)]; };
  return sample(
      [&](double t) {
        const double s = std::clamp(t / mesh.horizon, 0.0, 1.0) * knots;
        const int k = std::min(static_cast<int>(s), knots - 1);
        const double r = s - k;
        const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
        return 0.5 * (2.0 * p1 + (p2 - p0) * r + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * r * r +
                      (3.0 * p1 - p0 - 3.0 * p2 + p3) * r * r * r);
      },
      mesh);
}

PrincipleReport run_trials(const TrialSpec& spec) {
  if (spec.lattice.empty()) throw ContractError("run_trials: empty (alpha, beta) lattice");
  if (spec.trials < 1) throw ContractError("run_trials: trial count must be >= 1");
  const SpaceGrid grid{spec.a, spec.b, spec.n};
  const TimeMesh mesh{spec.horizon, spec.steps};
  grid.validate();
  mesh.validate();

  PrincipleReport total;
  for (int t = 0; t < spec.trials; ++t) {
    const auto [alpha, beta] = spec.lattice[t % spec.lattice.size()];
    const std::uint64_t seed = trial_seed(spec.seed, t);
    TrialData data = random_trial_data(spec.kind, grid, spec.horizon, seed);
    ProblemSpec problem{{alpha, beta}, grid, mesh, data.u0, data.forcing};
    PrincipleReport r;
    switch (spec.kind) {
      case ReportKind::nonneg:
        r = check_nonnegativity(solve(problem), positivity_tolerance(problem));
        break;
      case ReportKind::weak_nonneg: {
        // u solves the problem with f + slack, hence is a supersolution for f.
        ProblemSpec bigger = problem;
        bigger.forcing = [f = data.forcing, s = spec.slack](double x, double tt) { return f(x, tt) + s; };
        Solution sol = solve(bigger);
        sol.problem = problem;
        r = check_nonnegativity(sol, positivity_tolerance(bigger), ReportKind::weak_nonneg);
        break;
      }
      case ReportKind::boundary_min:
        r = check_parabolic_boundary(solve(problem), Extremum::min, positivity_tolerance(problem));
        break;
      case ReportKind::boundary_max:
        r = check_parabolic_boundary(solve(problem), Extremum::max, positivity_tolerance(problem));
        break;
    }
    r.seeds = {seed};
    r.trials = 1;
    total = t == 0 ? r : merge(std::move(total), r);
  }
  total.lattice = spec.lattice;
  return total;
}

}  // namespace fracmax

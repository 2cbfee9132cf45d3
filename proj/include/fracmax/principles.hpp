#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracmax/solver.hpp"
#include "fracmax/timefrac.hpp"

namespace fracmax {

enum class BoundaryClass { interior, lateral, initial, terminal };

std::string_view to_string(BoundaryClass c);

/// initial ∪ lateral.
bool on_parabolic_boundary(BoundaryClass c);

/// Tag for node i ∈ [0, n+1] (0 and n+1 are the exterior ghosts) at time index n ∈ [0, M].
/// Initial wins at n = 0; ghosts and edge-adjacent nodes are lateral; the remaining
/// nodes are terminal at n = M and interior otherwise.
BoundaryClass classify(const SpaceGrid& grid, const TimeMesh& mesh, int i, int n);

enum class ReportKind { nonneg, boundary_max, boundary_min, weak_nonneg };
enum class Outcome { pass, fail, not_applicable };

std::string_view to_string(ReportKind k);
std::string_view to_string(Outcome o);

struct NodeIndex {
  int i = 0;  // grid node, 0 and n+1 are ghosts
  int n = 0;  // time level
};

struct PrincipleReport {
  ReportKind kind = ReportKind::nonneg;
  Outcome outcome = Outcome::pass;
  double extremal = 0.0;
  NodeIndex location;
  BoundaryClass location_class = BoundaryClass::initial;
  double violation = 0.0;
  double tolerance = 0.0;
  int trials = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<double, double>> lattice;
  std::string note;

  bool passed() const { return outcome != Outcome::fail; }
  nlohmann::json to_json() const;
};

/// Folds b into a: worst violation wins, counts and seeds accumulate.
PrincipleReport merge(PrincipleReport a, const PrincipleReport& b);

/// 1e-12 · max(1, ‖u0‖_∞, ‖f‖_∞) over the sampled data.
double positivity_tolerance(const ProblemSpec& problem);

/// min over all nodes and steps; pass iff min ≥ -tol. Negative u0 or f samples make the
/// check not applicable rather than failed.
PrincipleReport check_nonnegativity(const Solution& sol, double tol,
                                    ReportKind kind = ReportKind::nonneg);

/// Extremum over the closed cylinder (ghost nodes included, where u = 0). Min mode needs
/// f ≥ 0, max mode f ≤ 0. Ties are resolved toward the parabolic boundary; the check passes
/// iff the extremum sits there and the interior extremum does not beat the boundary one by
/// more than tol.
PrincipleReport check_parabolic_boundary(const Solution& sol, Extremum sign, double tol);

struct TrialSpec {
  ReportKind kind = ReportKind::nonneg;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> lattice;  // (alpha, beta)
  double a = -1.0;
  double b = 1.0;
  int n = 128;
  double horizon = 1.0;
  int steps = 256;
  double slack = 1.0;  // weak_nonneg: solve with f + slack

  static std::vector<std::pair<double, double>> default_lattice();
};

/// Random data for one trial: clipped sums of five sine modes.
struct TrialData {
  Field u0;
  Forcing forcing;
};

TrialData random_trial_data(ReportKind kind, const SpaceGrid& grid, double horizon,
                            std::uint64_t seed);

std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Catmull–Rom spline through `knots` + 1 uniform knots with values in [-1, 1], sampled on
/// the mesh.
TimeSeries random_spline_trajectory(const TimeMesh& mesh, std::uint64_t seed, int knots = 8);

/// Runs spec.trials trials cycling through the lattice. Empty lattice or trials < 1 is a
/// ContractError.
PrincipleReport run_trials(const TrialSpec& spec);

}  // namespace fracmax

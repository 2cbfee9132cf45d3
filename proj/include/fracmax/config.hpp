#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fracmax/errors.hpp"
#include "fracmax/expr.hpp"
#include "fracmax/solver.hpp"

namespace fracmax {

/// Every validation problem found in one config, each prefixed with its key.
class ConfigError : public ContractError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct RunConfig {
  double alpha = 0.5;
  double beta = 0.5;
  double a = -1.0;
  double b = 1.0;
  int n = 64;
  double T = 1.0;
  int M = 64;
  std::string u0_src;
  std::string f_src;
  expr::Expr u0;
  expr::Expr f;
  int m = 64;
  int trials = 20;
  std::uint64_t seed = 0;
  std::string output = "out";
  std::string sha256;  // of the config file bytes

  SpaceGrid grid() const { return {a, b, n}; }
  TimeMesh mesh() const { return {T, M}; }
  ProblemSpec problem() const;
};

/// Flat JSON object. Required: alpha, beta, a, b, n, T, M, u0, f.
/// Optional: m (64), trials (20), seed (0), output ("out").
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace fracmax

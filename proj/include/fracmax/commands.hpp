#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fracmax/config.hpp"

namespace fracmax::cli {

enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_usage = 2, exit_numeric = 3 };

/// Artifacts are produced as strings first so a single writer can flush them.
std::string solution_csv(const Solution& sol);
nlohmann::json solution_metadata(const RunConfig& cfg, const Solution& sol);

/// Suites: nonneg, boundary, weak, identities, all. Unknown names are a ContractError.
nlohmann::json verify_report(const RunConfig& cfg, std::string_view suite);

/// Columns study, resolution, error, order.
std::string convergence_csv(const RunConfig& cfg);

/// The m ladder 4, 16, 64, ... up to cfg.m (just {cfg.m} when it is below 4).
std::vector<int> kernel_ladder(int m);
/// Columns m, t, g, g_m, h_m at t_1..t_M.
std::string kernel_table_csv(const RunConfig& cfg);
/// Columns m, l1_distance.
std::string kernel_l1_csv(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_verify(const RunConfig& cfg, std::string_view suite, const std::filesystem::path& out);
int cmd_convergence(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_kernel_table(const RunConfig& cfg, const std::filesystem::path& out);

/// Loads the config, dispatches and maps exceptions to exit codes; messages go to err.
int run(std::string_view command, const std::filesystem::path& config, std::string_view suite,
        const std::string& out_override, std::ostream& err);

}  // namespace fracmax::cli

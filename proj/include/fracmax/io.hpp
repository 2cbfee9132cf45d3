#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "fracmax/solver.hpp"

namespace fracmax {

/// 17 significant digits, '.' decimal point.
std::string format_real(double v);

std::string sha256_hex(std::string_view bytes);

/// Columns t, x, u; interior nodes only, time-major.
void write_solution_csv(const Solution& sol, std::ostream& os);

/// Writes bytes verbatim, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace fracmax

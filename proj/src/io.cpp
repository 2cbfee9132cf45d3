#include "fracmax/io.hpp"

#include <array>
#include <fstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "fracmax/errors.hpp"

namespace fracmax {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("sha256_hex: digest failed");
  }
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

void write_solution_csv(const Solution& sol, std::ostream& os) {
  const SpaceGrid& g = sol.problem.grid;
  const TimeMesh& mesh = sol.problem.mesh;
  std::string buf = "t,x,u\n";
  for (std::size_t n = 0; n < sol.states.size(); ++n) {
    const double t = mesh.steps ? mesh.t(static_cast<int>(n)) : 0.0;
    for (int i = 1; i <= g.n; ++i) {
      buf += fmt::format("{:.17g},{:.17g},{:.17g}\n", t, g.x(i), sol.states[n][i - 1]);
    }
  }
  os << buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ContractError("write failed for '" + path.string() + "'");
}

}  // namespace fracmax

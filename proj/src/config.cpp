#include "fracmax/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "fracmax/io.hpp"

namespace fracmax {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "\n" : "") + items[i];
  return out;
}

const std::set<std::string> kRequired{"alpha", "beta", "a", "b", "n", "T", "M", "u0", "f"};
const std::set<std::string> kOptional{"m", "trials", "seed", "output"};

class Reader {
 public:
  Reader(const nlohmann::json& obj, std::vector<std::string>& problems) : obj_(obj), problems_(problems) {}

  bool has(const std::string& key) const { return obj_.contains(key); }

  std::optional<double> real(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_number()) {
      problems_.push_back(fmt::format("{}: expected a number", key));
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      problems_.push_back(fmt::format("{}: must be finite", key));
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::trunc(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    problems_.push_back(fmt::format("{}: expected an integer", key));
    return std::nullopt;
  }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_string()) {
      problems_.push_back(fmt::format("{}: expected a string", key));
      return std::nullopt;
    }
    return v.get<std::string>();
  }

 private:
  const nlohmann::json& obj_;
  std::vector<std::string>& problems_;
};

void check_samples(const RunConfig& c, std::vector<std::string>& problems) {
  const SpaceGrid g = c.grid();
  for (int i = 1; i <= g.n; ++i) {
    const double v = c.u0.eval(g.x(i), 0.0);
    if (!std::isfinite(v)) {
      problems.push_back(fmt::format("u0: non-finite value {} at x = {}", v, g.x(i)));
      break;
    }
  }
  const TimeMesh mesh = c.mesh();
  for (int k = 0; k <= mesh.steps; ++k) {
    const double t = mesh.steps ? mesh.t(k) : 0.0;
    for (int i = 1; i <= g.n; ++i) {
      const double v = c.f.eval(g.x(i), t);
      if (!std::isfinite(v)) {
        problems.push_back(fmt::format("f: non-finite value {} at (x, t) = ({}, {})", v, g.x(i), t));
        return;
      }
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : ContractError(join(problems)), problems_(std::move(problems)) {}

ProblemSpec RunConfig::problem() const {
  const SpaceGrid g = grid();
  const expr::Expr u0e = u0, fe = f;
  return {{alpha, beta}, g, mesh(), Field::sample(g, [&](double x) { return u0e.eval(x, 0.0); }),
          [fe](double x, double t) { return fe.eval(x, t); }};
}

RunConfig parse_config(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({fmt::format("config: malformed JSON at byte {}: {}", e.byte, e.what())});
  }
  if (!obj.is_object()) throw ConfigError({"config: top level must be a JSON object"});

  std::vector<std::string> problems;
  for (const auto& [key, value] : obj.items()) {
    if (!kRequired.count(key) && !kOptional.count(key)) problems.push_back(fmt::format("{}: unknown key", key));
    if (value.is_object() || value.is_array()) problems.push_back(fmt::format("{}: nested values are not allowed", key));
  }
  for (const auto& key : kRequired)
    if (!obj.contains(key)) problems.push_back(fmt::format("{}: missing required key", key));

  RunConfig c;
  c.sha256 = sha256_hex(text);
  Reader r(obj, problems);
  auto open_unit = [&](const char* key, double& out) {
    if (auto v = r.real(key)) {
      if (!(*v > 0.0 && *v < 1.0)) problems.push_back(fmt::format("{}: must lie in the open interval (0, 1), got {}", key, *v));
      out = *v;
    }
  };
  open_unit("alpha", c.alpha);
  open_unit("beta", c.beta);
  const auto a = r.real("a");
  const auto b = r.real("b");
  if (a) c.a = *a;
  if (b) c.b = *b;
  if (a && b && !(*a < *b)) problems.push_back(fmt::format("b: must exceed a, got a = {}, b = {}", *a, *b));
  auto bounded_int = [&](const char* key, std::int64_t lo, std::int64_t hi, int& out) {
    if (auto v = r.integer(key)) {
      if (*v < lo || *v > hi) problems.push_back(fmt::format("{}: must lie in [{}, {}], got {}", key, lo, hi, *v));
      else out = static_cast<int>(*v);
    }
  };
  bounded_int("n", 1, 8192, c.n);
  bounded_int("M", 0, 100000, c.M);
  bounded_int("m", 1, 1 << 20, c.m);
  bounded_int("trials", 1, 1000000, c.trials);
  if (auto v = r.real("T")) {
    if (!(*v > 0.0)) problems.push_back(fmt::format("T: must be positive, got {}", *v));
    c.T = *v;
  }
  if (auto v = r.integer("seed")) {
    if (*v < 0) problems.push_back(fmt::format("seed: must be nonnegative, got {}", *v));
    else c.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.text("output")) {
    if (v->empty()) problems.push_back("output: must not be empty");
    c.output = *v;
  }
  bool exprs_ok = true;
  auto expression = [&](const char* key, expr::ParseOptions opt, std::string& src, expr::Expr& out) {
    if (auto v = r.text(key)) {
      src = *v;
      try {
        out = expr::parse(*v, opt);
        return;
      } catch (const expr::ParseError& e) {
        problems.push_back(fmt::format("{}: {}", key, e.what()));
      }
    }
    exprs_ok = false;
  };
  expression("u0", {.allow_x = true, .allow_t = false}, c.u0_src, c.u0);
  expression("f", {}, c.f_src, c.f);

  if (problems.empty() && exprs_ok) check_samples(c, problems);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({fmt::format("config: cannot open '{}'", path.string())});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fracmax

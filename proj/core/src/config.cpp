#include "sttd/config.hpp"

#include "sttd/error.hpp"
#include "sttd/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace sttd {

namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("config: '" + key + "' expects a finite number, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("config: '" + key + "' expects an integer, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define STTD_DOUBLE(member)                                                                   \
  Field {                                                                                     \
    [](RunConfig& c, const std::string& k, const std::string& v) { c.member = parse_double(k, v); }, \
        [](const RunConfig& c) { return fmt(c.member); }                                      \
  }
#define STTD_INT(member, type)                                                                   \
  Field {                                                                                        \
    [](RunConfig& c, const std::string& k, const std::string& v) { c.member = type(parse_int(k, v)); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }                              \
  }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"L", STTD_INT(solver.L, int)},
      {"H", STTD_DOUBLE(solver.H)},
      {"lambda-tv", STTD_DOUBLE(solver.lambda_tv)},
      {"lambda3", STTD_DOUBLE(solver.lambda3)},
      {"delta", STTD_DOUBLE(solver.delta)},
      {"eps", STTD_DOUBLE(solver.eps)},
      {"mu0", STTD_DOUBLE(solver.mu0)},
      {"mu-max", STTD_DOUBLE(solver.mu_max)},
      {"rho", STTD_DOUBLE(solver.rho)},
      {"zeta", STTD_DOUBLE(solver.zeta)},
      {"max-iter", STTD_INT(solver.max_iter, int)},
      {"svt-rule",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.solver.svt_rule = parse_svt_rule(v); },
        [](const RunConfig& c) { return std::string(to_string(c.solver.svt_rule)); }}},
      {"surrogate",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.solver.surrogate = parse_surrogate(v); },
        [](const RunConfig& c) { return std::string(to_string(c.solver.surrogate)); }}},
      {"tv-mode",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.solver.tv_mode = parse_tv_mode(v); },
        [](const RunConfig& c) { return std::string(to_string(c.solver.tv_mode)); }}},
      {"k", STTD_DOUBLE(segmentation.k)},
      {"vmin", STTD_DOUBLE(segmentation.vmin)},
      {"d", STTD_INT(geometry.d, long)},
      {"a", STTD_INT(geometry.a, long)},
      {"b", STTD_INT(geometry.b, long)},
      {"match-radius", STTD_DOUBLE(match_radius)},
      {"fa-count",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          if (v == "pixels") c.fa_count = FaCount::Pixels;
          else if (v == "components") c.fa_count = FaCount::Components;
          else throw InvalidArgument("config: '" + k + "' must be pixels or components");
        },
        [](const RunConfig& c) { return std::string(c.fa_count == FaCount::Pixels ? "pixels" : "components"); }}},
      {"roc-points", STTD_INT(roc_points, int)},
      {"threads", STTD_INT(threads, int)},
      {"seed",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          const long long s = parse_int(k, v);
          if (s < 0) throw InvalidArgument("config: seed must be >= 0");
          c.seed = std::uint64_t(s);
        },
        [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"input",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.input = v; },
        [](const RunConfig& c) { return c.input; }}},
      {"output",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.output = v; },
        [](const RunConfig& c) { return c.output; }}},
  };
  return table;
}

#undef STTD_DOUBLE
#undef STTD_INT

}  // namespace

void RunConfig::validate() const {
  solver.validate();
  if (!(segmentation.vmin >= 0.0 && segmentation.vmin <= 1.0)) throw InvalidArgument("vmin must be in [0, 1]");
  if (!(segmentation.k >= 0.0)) throw InvalidArgument("k must be >= 0");
  if (geometry.d < 1 || geometry.a < 1 || geometry.b < 1) throw InvalidArgument("d, a and b must be >= 1");
  if (!(match_radius >= 0.0)) throw InvalidArgument("match-radius must be >= 0");
  if (roc_points < 2) throw InvalidArgument("roc-points must be >= 2");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.first);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string k = normalize_key(key);
  for (const auto& [name, field] : fields()) {
    if (name == k) {
      field.set(cfg, k, value);
      return;
    }
  }
  throw InvalidArgument("config: unknown key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config: line " + std::to_string(lineno) + " is not key=value");
    }
    set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  apply_config_text(cfg, read_text(path));
}

std::string to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace sttd

#include "enpp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "enpp/error.hpp"

namespace enpp {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Thrown by value parsers; the caller attaches the location.
struct BadValue {
  std::string message;
};

double parse_real(std::string_view raw) {
  const std::string v = lower(trim(raw));
  if (v == "inf" || v == "infinity") return kInf;
  std::string_view num = v;
  double factor = 1.0;
  if (num.size() >= 2 && num.substr(num.size() - 2) == "pi") {
    factor = std::numbers::pi;
    num = trim(num.substr(0, num.size() - 2));
    if (!num.empty() && num.back() == '*') num = trim(num.substr(0, num.size() - 1));
    if (num.empty()) return factor;
  }
  double x = 0.0;
  const auto res = std::from_chars(num.data(), num.data() + num.size(), x);
  if (res.ec != std::errc() || res.ptr != num.data() + num.size()) {
    throw BadValue{"expected a number, got '" + std::string(trim(raw)) + "'"};
  }
  return x * factor;
}

long long parse_integer(std::string_view raw) {
  const std::string_view v = trim(raw);
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw BadValue{"expected an integer, got '" + std::string(v) + "'"};
  }
  return x;
}

bool parse_bool(std::string_view raw) {
  const std::string v = lower(trim(raw));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw BadValue{"expected true or false, got '" + std::string(trim(raw)) + "'"};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

BesovSpec parse_besov(std::string_view raw) {
  const auto parts = split(raw, ',');
  if (parts.size() != 3) throw BadValue{"expected 's, p, r', got '" + std::string(trim(raw)) + "'"};
  try {
    return BesovSpec(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]));
  } catch (const InvalidArgument& e) {
    throw BadValue{e.what()};
  }
}

using Apply = std::function<void(RunConfig&, std::string_view)>;

struct KeyDef {
  const char* section;
  const char* key;
  Apply apply;
};

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"grid", "d", [](RunConfig& c, std::string_view v) { c.dim = static_cast<int>(parse_integer(v)); }},
      {"grid", "N", [](RunConfig& c, std::string_view v) { c.points = static_cast<int>(parse_integer(v)); }},
      {"grid", "L", [](RunConfig& c, std::string_view v) { c.length = parse_real(v); }},

      {"initial", "preset", [](RunConfig& c, std::string_view v) { c.initial.preset = std::string(trim(v)); }},
      {"initial", "amplitude", [](RunConfig& c, std::string_view v) { c.initial.amplitude = parse_real(v); }},
      {"initial", "charge_amplitude", [](RunConfig& c, std::string_view v) { c.initial.charge_amplitude = parse_real(v); }},
      {"initial", "background", [](RunConfig& c, std::string_view v) { c.initial.background = parse_real(v); }},
      {"initial", "width", [](RunConfig& c, std::string_view v) { c.initial.width = parse_real(v); }},
      {"initial", "charge_imbalance", [](RunConfig& c, std::string_view v) { c.initial.charge_imbalance = parse_real(v); }},
      {"initial", "seed", [](RunConfig& c, std::string_view v) {
         const auto s = parse_integer(v);
         if (s < 0) throw BadValue{"seed must be nonnegative"};
         c.initial.seed = static_cast<std::uint64_t>(s);
       }},

      {"run", "mode", [](RunConfig& c, std::string_view v) {
         const std::string m = lower(trim(v));
         if (m == "simulate") c.mode = Mode::simulate;
         else if (m == "iterate") c.mode = Mode::iterate;
         else if (m == "invlimit") c.mode = Mode::invlimit;
         else throw BadValue{"mode must be simulate, iterate or invlimit"};
       }},
      {"run", "viscosity", [](RunConfig& c, std::string_view v) { c.viscosity = parse_real(v); }},
      {"run", "T", [](RunConfig& c, std::string_view v) { c.horizon = parse_real(v); }},
      {"run", "dt", [](RunConfig& c, std::string_view v) {
         if (lower(trim(v)) == "auto") c.dt.reset();
         else c.dt = parse_real(v);
       }},
      {"run", "cfl", [](RunConfig& c, std::string_view v) { c.cfl = parse_real(v); }},
      {"run", "cadence", [](RunConfig& c, std::string_view v) { c.cadence = static_cast<int>(parse_integer(v)); }},
      {"run", "formulation", [](RunConfig& c, std::string_view v) {
         const std::string f = lower(trim(v));
         if (f == "enpp") c.formulation = Formulation::enpp;
         else if (f == "modified") c.formulation = Formulation::modified;
         else throw BadValue{"formulation must be enpp or modified"};
       }},
      {"run", "renormalize_charge", [](RunConfig& c, std::string_view v) { c.renormalize_charge = parse_bool(v); }},
      {"run", "strict", [](RunConfig& c, std::string_view v) { c.strict = parse_bool(v); }},
      {"run", "output", [](RunConfig& c, std::string_view v) { c.output = std::string(trim(v)); }},

      {"measure", "besov", [](RunConfig& c, std::string_view v) {
         c.besov_specs.clear();
         for (auto item : split(v, ';')) {
           if (!item.empty()) c.besov_specs.push_back(parse_besov(item));
         }
       }},
      {"measure", "rho", [](RunConfig& c, std::string_view v) { c.rho = parse_real(v); }},
      {"measure", "velocity_index", [](RunConfig& c, std::string_view v) { c.indices.velocity = parse_besov(v); }},
      {"measure", "charge_index", [](RunConfig& c, std::string_view v) { c.indices.charge = parse_besov(v); }},

      {"tolerances", "divergence", [](RunConfig& c, std::string_view v) { c.tolerances.div_tolerance = parse_real(v); }},
      {"tolerances", "mass", [](RunConfig& c, std::string_view v) { c.tolerances.mass_tolerance = parse_real(v); }},
      {"tolerances", "positivity", [](RunConfig& c, std::string_view v) { c.tolerances.positivity_fraction = parse_real(v); }},
      {"tolerances", "lp_slack", [](RunConfig& c, std::string_view v) { c.tolerances.lp_slack = parse_real(v); }},

      {"iterate", "max_iterations", [](RunConfig& c, std::string_view v) { c.max_iterations = static_cast<int>(parse_integer(v)); }},
      {"iterate", "tolerance", [](RunConfig& c, std::string_view v) { c.picard_tolerance = parse_real(v); }},

      {"lifespan", "c", [](RunConfig& c, std::string_view v) { c.lifespan_c = parse_real(v); }},
      {"lifespan", "r", [](RunConfig& c, std::string_view v) { c.lifespan_r = parse_real(v); }},

      {"invlimit", "viscosities", [](RunConfig& c, std::string_view v) {
         c.viscosities.clear();
         for (auto item : split(v, ',')) c.viscosities.push_back(parse_real(item));
       }},
      {"invlimit", "threads", [](RunConfig& c, std::string_view v) { c.threads = static_cast<int>(parse_integer(v)); }},
  };
  return table;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = std::tolower(a[i - 1]) == std::tolower(b[j - 1]) ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

class Validator {
 public:
  Validator(const std::string& source, const std::map<std::string, int>& lines)
      : source_(source), lines_(lines) {}

  void require(bool ok, const std::string& key, const std::string& message) const {
    if (ok) return;
    const auto it = lines_.find(key);
    std::ostringstream os;
    os << source_;
    if (it != lines_.end()) os << ":" << it->second;
    os << ": invalid " << key << ": " << message;
    throw ConfigError(os.str());
  }

 private:
  const std::string& source_;
  const std::map<std::string, int>& lines_;
};

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"taylor-green", "charged-taylor-green",
                                              "charged-blob", "random-solenoidal"};
  return names;
}

void validate(const RunConfig& c, const Validator& v) {
  v.require(c.dim == 2 || c.dim == 3, "grid.d", "dimension must be 2 or 3");
  v.require(c.points >= 8 && c.points % 2 == 0, "grid.N", "N must be even and at least 8");
  v.require(c.length > 0.0 && std::isfinite(c.length), "grid.L", "period must be positive");

  v.require(std::find(preset_names().begin(), preset_names().end(), c.initial.preset) !=
                preset_names().end(),
            "initial.preset",
            "unknown preset '" + c.initial.preset +
                "' (taylor-green, charged-taylor-green, charged-blob, random-solenoidal)");
  v.require(c.initial.amplitude >= 0.0 && c.initial.amplitude <= 100.0, "initial.amplitude",
            "velocity amplitude must lie in [0, 100]");
  v.require(c.initial.background >= 0.0, "initial.background", "background must be nonnegative");
  v.require(c.initial.charge_amplitude >= 0.0 && c.initial.charge_amplitude <= c.initial.background,
            "initial.charge_amplitude",
            "charge amplitude must lie in [0, background] to keep densities nonnegative");
  v.require(c.initial.width > 0.0 && c.initial.width <= 2.0, "initial.width",
            "blob width must lie in (0, 2]");
  v.require(c.initial.charge_imbalance > -1.0 && c.initial.charge_imbalance <= 1.0,
            "initial.charge_imbalance", "imbalance must lie in (-1, 1]");

  v.require(c.viscosity >= 0.0 && std::isfinite(c.viscosity), "run.viscosity",
            "viscosity must be nonnegative");
  v.require(c.horizon > 0.0 && std::isfinite(c.horizon), "run.T", "T must be positive");
  v.require(!c.dt || (*c.dt > 0.0 && std::isfinite(*c.dt)), "run.dt", "dt must be positive");
  v.require(c.cfl > 0.0 && c.cfl <= 2.0, "run.cfl", "cfl must lie in (0, 2]");
  v.require(c.cadence >= 1, "run.cadence", "cadence must be a positive integer");

  v.require(c.rho >= 1.0, "measure.rho", "rho must lie in [1, inf]");
  v.require(c.tolerances.div_tolerance > 0.0, "tolerances.divergence", "must be positive");
  v.require(c.tolerances.mass_tolerance > 0.0, "tolerances.mass", "must be positive");
  v.require(c.tolerances.positivity_fraction >= 0.0, "tolerances.positivity", "must be nonnegative");
  v.require(c.tolerances.lp_slack >= 0.0, "tolerances.lp_slack", "must be nonnegative");

  v.require(c.max_iterations >= 1, "iterate.max_iterations", "must be at least 1");
  v.require(c.picard_tolerance > 0.0, "iterate.tolerance", "must be positive");

  v.require(c.lifespan_c > 0.0, "lifespan.c", "c must be positive");
  v.require(c.lifespan_r >= 4.0, "lifespan.r", "r must be at least 4");

  v.require(c.threads >= 0, "invlimit.threads", "must be nonnegative");
  if (c.mode == Mode::invlimit) {
    v.require(c.viscosities.size() >= 3, "invlimit.viscosities", "need at least 3 viscosities");
    for (std::size_t i = 0; i < c.viscosities.size(); ++i) {
      v.require(c.viscosities[i] > 0.0, "invlimit.viscosities", "viscosities must be positive");
      if (i > 0) {
        v.require(c.viscosities[i] < c.viscosities[i - 1], "invlimit.viscosities",
                  "viscosities must be strictly decreasing");
      }
    }
  }
}

}  // namespace

std::vector<std::string> known_config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.push_back(std::string(k.section) + "." + k.key);
  return out;
}

std::optional<std::string> suggest_key(std::string_view unknown) {
  std::optional<std::string> best;
  std::size_t best_d = 4;
  for (const auto& k : key_table()) {
    const std::size_t d = edit_distance(unknown, k.key);
    if (d < best_d) {
      best_d = d;
      best = k.key;
    }
  }
  return best;
}

RunConfig parse_config_text(std::string_view text, const std::string& source) {
  RunConfig config;
  std::map<std::string, int> lines;
  std::string section;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) {
      // ';' also separates Besov triples, so it only starts a comment at line start.
      if (line[c] == '#' || trim(line.substr(0, c)).empty()) line = line.substr(0, c);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + std::string(line) + "'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      const bool known = std::any_of(key_table().begin(), key_table().end(),
                                     [&](const KeyDef& k) { return section == k.section; });
      if (!known) fail("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail("missing key before '='");

    const KeyDef* def = nullptr;
    for (const auto& k : key_table()) {
      if (k.key == key && (section.empty() || section == k.section)) {
        def = &k;
        break;
      }
    }
    if (def == nullptr) {
      const auto owner = std::find_if(key_table().begin(), key_table().end(),
                                      [&](const KeyDef& k) { return k.key == key; });
      if (owner != key_table().end()) {
        fail("key '" + key + "' belongs in section [" + owner->section + "]");
      }
      std::string msg = "unknown key '" + key + "'";
      if (auto s = suggest_key(key)) msg += " (did you mean '" + *s + "'?)";
      fail(msg);
    }
    const std::string qualified = std::string(def->section) + "." + def->key;
    if (lines.count(qualified)) fail("duplicate key '" + key + "'");
    lines[qualified] = line_no;
    if (value.empty()) fail("missing value for '" + key + "'");
    try {
      def->apply(config, value);
    } catch (const BadValue& e) {
      fail(key + ": " + e.message);
    }
  }

  validate(config, Validator(source, lines));
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

int plan_steps(const RunConfig& config, const SimState& initial) {
  if (config.cadence < 1) throw ConfigError("cadence must be a positive integer");
  if (config.dt) {
    const double ratio = config.horizon / *config.dt;
    const long long steps = std::llround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
      throw ConfigError("dt must divide T into a whole number of steps");
    }
    if (steps % config.cadence != 0) {
      throw ConfigError("cadence " + std::to_string(config.cadence) + " does not divide the step count " +
                        std::to_string(steps));
    }
    return static_cast<int>(steps);
  }
  const double limit = max_stable_dt(initial, config.cfl);
  long long steps = static_cast<long long>(std::ceil(config.horizon / limit - 1e-12));
  steps = std::max<long long>(steps, 1);
  steps = (steps + config.cadence - 1) / config.cadence * config.cadence;
  return static_cast<int>(steps);
}

}  // namespace enpp

#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "ergolab/cli/toml.hpp"
#include "ergolab/limits.hpp"
#include "ergolab/system.hpp"

namespace ergolab::cli {

/// One batch run. Semantic fields are echoed into the report (defaults
/// included); execution fields (threads, paths, timing) are not, so reports
/// are byte-identical across thread counts.
struct RunConfig {
  std::string command;  // average | limit | seminorm | probe | cube-language | vdc | tempered | compare

  std::string system_spec = "rotation:golden";
  std::string kind;                  // average: birkhoff|folner|ap|cube-face|cube-full
                                     // limit: wm-product|rotation-ap|rotation-cube-face|
                                     //        rotation-cube-full|slice|longrun
  std::vector<std::string> f;        // ordered observable slots
  std::vector<std::string> faces;    // "eps=entries" face observables
  std::string g;                     // slice second observable
  int d = 1;
  std::string schedule = "64..4096";
  std::string strides = "1";         // folner / probe action strides
  std::string x;                     // base point ("" = origin)
  std::vector<std::string> probe_x;  // explicit probe points
  int probe_points = 16;
  std::uint64_t seed = 1;
  std::int64_t N = 0;
  std::int64_t H = 0;
  std::int64_t N_big = 8192;
  std::int64_t nmax = 64;
  int k = 2;
  std::string method = "exact";  // seminorm method
  std::string slice_map = "shift";
  std::string s = "0";           // slice parameter
  std::string sequence = "orbit";  // vdc: orbit|constant|rotation-char|quadratic-char
  std::string avg_kind = "ap";     // longrun underlying average
  int L = 1;
  double threshold = 5e-2;
  double tolerance = 1e-2;
  int tail_window = 3;
  std::uint64_t grid_cap = kDefaultGridCap;
  std::uint64_t term_cap = 1u << 20;
  std::uint64_t op_cap = 1ull << 34;
  std::uint64_t horizon_cap = 1ull << 24;
  double fail_above = -1.0;  // compare: exit 3 when max diff exceeds (if >= 0)

  // execution-only, never echoed
  int threads = 1;
  std::string out_dir;
  std::string report_path;
  std::string csv_path;
  bool emit_timing = false;
  std::string compare_a, compare_b;
};

// ---------------------------------------------------------------------------
// spec-string parsers

inline CirclePoint parse_circle_value(const std::string& spec) {
  if (spec == "golden") return CirclePoint::golden();
  auto slash = spec.find('/');
  try {
    if (slash != std::string::npos) {
      std::int64_t num = std::stoll(spec.substr(0, slash));
      std::int64_t den = std::stoll(spec.substr(slash + 1));
      return CirclePoint::from_fraction(num, den);
    }
    std::size_t used = 0;
    double t = std::stod(spec, &used);
    if (used != spec.size()) throw ConfigError("");
    return CirclePoint::from_turns(t);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse circle value '" + spec + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline SystemDescriptor parse_system(const std::string& spec, std::uint64_t horizon_cap) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "rotation") {
    if (rest.empty()) throw ConfigError("system 'rotation' needs alpha, e.g. rotation:golden");
    std::vector<CirclePoint> alpha;
    for (const auto& part : split(rest, ',')) alpha.push_back(parse_circle_value(part));
    return make_rotation(std::move(alpha));
  }
  if (head == "skew") {
    if (rest.empty()) throw ConfigError("system 'skew' needs alpha, e.g. skew:golden");
    return make_skew_product(parse_circle_value(rest));
  }
  if (head == "cat") return make_cat_map();
  if (head == "toral") {
    auto parts = split(rest, ',');
    if (parts.size() != 4) throw ConfigError("system 'toral' needs 4 matrix entries a,b,c,d");
    return make_toral_automorphism(std::stoll(parts[0]), std::stoll(parts[1]),
                                   std::stoll(parts[2]), std::stoll(parts[3]));
  }
  if (head == "subshift") {
    if (rest.empty()) throw ConfigError("system 'subshift' needs a rule, e.g. subshift:thue_morse");
    return make_subshift(rest, horizon_cap);
  }
  if (head == "product") {
    auto bar = rest.find('|');
    if (bar == std::string::npos) throw ConfigError("system 'product' needs left|right");
    return make_product(parse_system(rest.substr(0, bar), horizon_cap),
                        parse_system(rest.substr(bar + 1), horizon_cap));
  }
  throw ConfigError("unknown system '" + spec + "'");
}

inline Point parse_point(const SystemDescriptor& sys, const std::string& spec) {
  if (spec.empty()) return base_point(sys);
  if (sys.torus_dim == 0) {
    const auto& sub = std::get<SubshiftSystem>(sys.variant);
    try {
      return SymbolicPoint{sub.orbit, static_cast<std::uint64_t>(std::stoull(spec))};
    } catch (const std::exception&) {
      throw ConfigError("subshift point must be a non-negative offset, got '" + spec + "'");
    }
  }
  TorusPoint p;
  for (const auto& part : split(spec, ',')) p.coords.push_back(parse_circle_value(part));
  if (p.dim() != sys.torus_dim)
    throw ConfigError("point '" + spec + "' has dimension " + std::to_string(p.dim()) +
                      ", system needs " + std::to_string(sys.torus_dim));
  return p;
}

inline Complex parse_complex(const std::string& spec) {
  auto parts = split(spec, ',');
  try {
    if (parts.size() == 1) return Complex{std::stod(parts[0]), 0.0};
    if (parts.size() == 2) return Complex{std::stod(parts[0]), std::stod(parts[1])};
  } catch (const std::exception&) {
  }
  throw ConfigError("cannot parse complex coefficient '" + spec + "'");
}

/// torus observables: ';'-separated "k1,..,kr:re[,im]" terms
inline TrigPoly parse_trig_poly(const std::string& spec, std::size_t dim) {
  TrigPoly poly(dim);
  for (const auto& entry : split(spec, ';')) {
    if (entry.empty()) continue;
    auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw ConfigError("observable entry '" + entry + "' must be freq:coeff");
    FreqVec k;
    for (const auto& part : split(entry.substr(0, colon), ',')) {
      try {
        k.push_back(std::stoll(part));
      } catch (const std::exception&) {
        throw ConfigError("bad frequency '" + part + "' in '" + entry + "'");
      }
    }
    if (k.size() != dim)
      throw ConfigError("frequency in '" + entry + "' has dimension " +
                        std::to_string(k.size()) + ", system needs " + std::to_string(dim));
    poly.add_term(std::move(k), parse_complex(entry.substr(colon + 1)));
  }
  if (poly.coeffs.empty()) throw ConfigError("observable '" + spec + "' is empty");
  return poly;
}

/// subshift observables: ';'-separated "word=re[,im]" entries
inline CylinderFunc parse_cylinder(const std::string& spec, std::int64_t window_start = 0) {
  CylinderFunc f;
  f.window_start = window_start;
  std::size_t len = 0;
  for (const auto& entry : split(spec, ';')) {
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError("cylinder entry '" + entry + "' must be word=coeff");
    std::string word = entry.substr(0, eq);
    if (word.empty()) throw ConfigError("empty word in cylinder entry '" + entry + "'");
    if (len == 0) len = word.size();
    if (word.size() != len)
      throw ConfigError("cylinder words must share one window length");
    f.table[word] = parse_complex(entry.substr(eq + 1));
  }
  if (f.table.empty()) throw ConfigError("cylinder observable '" + spec + "' is empty");
  f.window_len = len;
  return f;
}

inline Observable parse_observable(const SystemDescriptor& sys, const std::string& spec) {
  if (sys.torus_dim == 0) return parse_cylinder(spec);
  return parse_trig_poly(spec, sys.torus_dim);
}

/// face observables: "eps=entries" with eps the bit string eps_1 eps_2 ... eps_d
inline std::pair<std::uint32_t, std::string> parse_face_spec(const std::string& spec, int d) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("face '" + spec + "' must be eps=entries");
  std::string bits = spec.substr(0, eq);
  if (bits.size() != static_cast<std::size_t>(d))
    throw ConfigError("face index '" + bits + "' must have exactly d = " + std::to_string(d) +
                      " bits");
  std::uint32_t eps = 0;
  for (int i = 0; i < d; ++i) {
    char c = bits[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1') throw ConfigError("face index '" + bits + "' must be 0/1 bits");
    if (c == '1') eps |= 1u << i;
  }
  return {eps, spec.substr(eq + 1)};
}

inline std::vector<std::int64_t> parse_schedule(const std::string& spec) {
  std::vector<std::int64_t> out;
  auto dots = spec.find("..");
  try {
    if (dots != std::string::npos) {
      std::int64_t lo = std::stoll(spec.substr(0, dots));
      std::int64_t hi = std::stoll(spec.substr(dots + 2));
      if (lo < 1 || hi < lo) throw ConfigError("");
      for (std::int64_t n = lo; n <= hi; n *= 2) out.push_back(n);
      return out;
    }
    for (const auto& part : split(spec, ',')) out.push_back(std::stoll(part));
  } catch (const ConfigError&) {
    throw ConfigError("bad schedule '" + spec + "' (use lo..hi or a comma list)");
  } catch (const std::exception&) {
    throw ConfigError("bad schedule '" + spec + "' (use lo..hi or a comma list)");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1 || (i > 0 && out[i] <= out[i - 1]))
      throw ConfigError("schedule '" + spec + "' must be strictly increasing and positive");
  }
  if (out.empty()) throw ConfigError("schedule '" + spec + "' is empty");
  return out;
}

inline std::vector<std::int64_t> parse_strides(const std::string& spec) {
  std::vector<std::int64_t> out;
  try {
    for (const auto& part : split(spec, ',')) out.push_back(std::stoll(part));
  } catch (const std::exception&) {
    throw ConfigError("bad strides '" + spec + "'");
  }
  if (out.empty()) throw ConfigError("strides '" + spec + "' is empty");
  return out;
}

// ---------------------------------------------------------------------------
// TOML + validation

inline void apply_toml(RunConfig& cfg, const TomlTable& t) {
  auto str = [&](const char* key, std::string& field) {
    auto it = t.find(key);
    if (it != t.end()) field = it->second.as_string();
  };
  auto strs = [&](const char* key, std::vector<std::string>& field) {
    auto it = t.find(key);
    if (it == t.end()) return;
    field.clear();
    if (it->second.is_array()) {
      for (const auto& v : it->second.array()) field.push_back(v.as_string());
    } else {
      field.push_back(it->second.as_string());
    }
  };
  auto i64f = [&](const char* key, std::int64_t& field) {
    auto it = t.find(key);
    if (it != t.end()) field = it->second.as_int();
  };
  auto u64f = [&](const char* key, std::uint64_t& field) {
    auto it = t.find(key);
    if (it != t.end()) field = static_cast<std::uint64_t>(it->second.as_int());
  };
  auto intf = [&](const char* key, int& field) {
    auto it = t.find(key);
    if (it != t.end()) field = static_cast<int>(it->second.as_int());
  };
  auto dblf = [&](const char* key, double& field) {
    auto it = t.find(key);
    if (it != t.end()) field = it->second.as_double();
  };
  str("command", cfg.command);
  str("system", cfg.system_spec);
  str("kind", cfg.kind);
  strs("f", cfg.f);
  strs("faces", cfg.faces);
  str("g", cfg.g);
  intf("d", cfg.d);
  str("schedule", cfg.schedule);
  str("strides", cfg.strides);
  str("x", cfg.x);
  strs("probe_x", cfg.probe_x);
  intf("probe_points", cfg.probe_points);
  u64f("seed", cfg.seed);
  i64f("N", cfg.N);
  i64f("H", cfg.H);
  i64f("N_big", cfg.N_big);
  i64f("nmax", cfg.nmax);
  intf("k", cfg.k);
  str("method", cfg.method);
  str("slice_map", cfg.slice_map);
  str("s", cfg.s);
  str("sequence", cfg.sequence);
  str("avg_kind", cfg.avg_kind);
  intf("L", cfg.L);
  dblf("threshold", cfg.threshold);
  dblf("tolerance", cfg.tolerance);
  intf("tail_window", cfg.tail_window);
  u64f("grid_cap", cfg.grid_cap);
  u64f("term_cap", cfg.term_cap);
  u64f("op_cap", cfg.op_cap);
  u64f("horizon_cap", cfg.horizon_cap);
  dblf("fail_above", cfg.fail_above);
  intf("threads", cfg.threads);
  str("out_dir", cfg.out_dir);
  str("report", cfg.report_path);
  str("csv", cfg.csv_path);
}

inline void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands = {
      "average", "limit", "seminorm", "probe", "cube-language", "vdc", "tempered", "compare"};
  bool known = false;
  for (const auto& c : commands) known = known || c == cfg.command;
  if (!known) throw ConfigError("command: unknown command '" + cfg.command + "'");
  if (cfg.d < 1) throw ConfigError("d: must be >= 1, got " + std::to_string(cfg.d));
  if (cfg.command == "average") {
    static const std::vector<std::string> kinds = {"birkhoff", "folner", "ap", "cube-face",
                                                   "cube-full"};
    bool ok = false;
    for (const auto& kd : kinds) ok = ok || kd == cfg.kind;
    if (!ok) throw ConfigError("kind: average kind '" + cfg.kind + "' unknown");
    if ((cfg.kind == "birkhoff" || cfg.kind == "folner" || cfg.kind == "ap") && cfg.f.empty())
      throw ConfigError("f: at least one observable required");
    if ((cfg.kind == "cube-face" || cfg.kind == "cube-full") && cfg.faces.empty())
      throw ConfigError("faces: at least one face observable required");
  }
  if (cfg.command == "seminorm") {
    if (cfg.method != "exact" && cfg.method != "empirical")
      throw ConfigError("method: seminorm method must be exact or empirical");
    if (cfg.f.empty()) throw ConfigError("f: observable required");
    if (cfg.k < 1) throw ConfigError("k: must be >= 1");
    if (cfg.method == "empirical" && (cfg.N < 1 || cfg.H < 1))
      throw ConfigError("N/H: empirical seminorm needs N >= 1 and H >= 1");
  }
  if (cfg.command == "probe" && cfg.f.empty()) throw ConfigError("f: observable required");
  if (cfg.command == "vdc" && (cfg.N < 1 || cfg.H < 1))
    throw ConfigError("N/H: vdc needs N >= 1 and H >= 1");
  if (cfg.command == "tempered" && cfg.nmax < 1) throw ConfigError("nmax: must be >= 1");
  if (cfg.command == "cube-language" && cfg.L < 1) throw ConfigError("L: must be >= 1");
  if (cfg.command == "compare" && (cfg.compare_a.empty() || cfg.compare_b.empty()))
    throw ConfigError("compare: two report paths required");
  if (cfg.threads < 1) throw ConfigError("threads: must be >= 1");
}

inline std::string default_out_dir() {
  const char* env = std::getenv("ERGOLAB_OUT_DIR");
  return env == nullptr ? std::string(".") : std::string(env);
}

}  // namespace ergolab::cli

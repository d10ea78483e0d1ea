#include "mcsv/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mcsv/error.hpp"

namespace mcsv {

namespace {

using json = nlohmann::json;

struct Entry {
  json value;
  int line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"", {"grid_n", "profile", "s", "lambda", "lambda_factor", "eps", "eps_ladder", "seed",
            "output", "mask_radius"}},
      {"vortices", {"positives", "negatives"}},
      {"solver",
       {"descent_tol", "newton_tol", "armijo", "tau", "max_descent_iter", "max_newton_iter",
        "gmres_rtol", "gmres_restart", "gmres_cycles", "path_nodes", "mp_tol", "max_mp_iter",
        "redistribute_every", "separation"}},
      {"physical", {"q", "kappa", "S"}},
  };
  return keys;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorKind::Config, "line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

double get_number(const Entry& e, const std::string& key) {
  if (!e.value.is_number()) fail(e.line, "'" + key + "' must be a number");
  return e.value.get<double>();
}

long long get_integer(const Entry& e, const std::string& key) {
  if (!e.value.is_number_integer()) fail(e.line, "'" + key + "' must be an integer");
  return e.value.get<long long>();
}

std::vector<Point> get_points(const Entry& e, const std::string& key) {
  if (!e.value.is_array()) fail(e.line, "'" + key + "' must be a list of [x1, x2] pairs");
  std::vector<Point> pts;
  for (const json& p : e.value) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      fail(e.line, "'" + key + "' entries must be [x1, x2] number pairs");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return pts;
}

json points_json(const std::vector<Point>& pts) {
  json out = json::array();
  for (const Point& p : pts) out.push_back({p.x1, p.x2});
  return out;
}

}  // namespace

ModelParams RunConfig::model(double lambda0) const {
  ModelParams p;
  p.profile = profile_by_name(profile);
  if (physical) {
    const PhysicalMapping m = map_physical_params(physical->q, physical->kappa, physical->S);
    p.lambda = m.lambda;
    p.eps = m.eps;
    p.s = m.s;
  } else {
    p.lambda = lambda ? *lambda : lambda_factor * lambda0;
    p.eps = eps;
    p.s = s;
  }
  return p;
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_line;
  std::string current;
  sections[current];
  section_line[current] = 1;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().count(current)) fail(line_no, "unknown section [" + current + "]");
      if (section_line.count(current) && !current.empty()) {
        fail(line_no, "duplicate section [" + current + "]");
      }
      sections[current];
      section_line[current] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!allowed_keys().at(current).count(key)) {
      fail(line_no, "unknown key '" + key + "'" +
                        (current.empty() ? std::string() : " in [" + current + "]"));
    }
    if (sections[current].count(key)) fail(line_no, "duplicate key '" + key + "'");
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      fail(line_no, "value of '" + key + "' is not a valid literal: " + value);
    }
    sections[current][key] = {parsed, line_no};
  }

  RunConfig cfg;
  const Section& top = sections[""];
  auto has = [&](const Section& s, const char* k) { return s.count(k) > 0; };

  if (has(top, "grid_n")) {
    const long long n = get_integer(top.at("grid_n"), "grid_n");
    if (n < 8 || n % 2 != 0 || n > 8192) {
      fail(top.at("grid_n").line, "grid_n must be an even integer in [8, 8192]");
    }
    cfg.grid_n = static_cast<int>(n);
  }
  if (has(top, "profile")) {
    const Entry& e = top.at("profile");
    if (!e.value.is_string()) fail(e.line, "'profile' must be a string");
    cfg.profile = e.value.get<std::string>();
    try {
      profile_by_name(cfg.profile);
    } catch (const Error& err) {
      fail(e.line, err.what());
    }
  }
  if (has(top, "s")) cfg.s = get_number(top.at("s"), "s");
  if (has(top, "lambda")) {
    const Entry& e = top.at("lambda");
    if (e.value.is_string()) {
      if (e.value.get<std::string>() != "auto") fail(e.line, "'lambda' must be \"auto\" or a number");
      cfg.lambda.reset();
    } else {
      cfg.lambda = get_number(e, "lambda");
      if (!(*cfg.lambda > 0.0)) fail(e.line, "'lambda' must be positive");
    }
  }
  if (has(top, "lambda_factor")) {
    cfg.lambda_factor = get_number(top.at("lambda_factor"), "lambda_factor");
    if (!(cfg.lambda_factor >= 1.0)) {
      fail(top.at("lambda_factor").line, "'lambda_factor' must be at least 1");
    }
  }
  if (has(top, "eps")) {
    cfg.eps = get_number(top.at("eps"), "eps");
    if (!(cfg.eps > 0.0)) fail(top.at("eps").line, "'eps' must be positive");
  }
  if (has(top, "eps_ladder")) {
    const Entry& e = top.at("eps_ladder");
    if (!e.value.is_array() || e.value.empty()) fail(e.line, "'eps_ladder' must be a list");
    cfg.eps_ladder.clear();
    for (const json& v : e.value) {
      if (!v.is_number()) fail(e.line, "'eps_ladder' entries must be numbers");
      const double x = v.get<double>();
      if (!(x > 0.0) || (!cfg.eps_ladder.empty() && !(x < cfg.eps_ladder.back()))) {
        fail(e.line, "'eps_ladder' must be positive and strictly decreasing");
      }
      cfg.eps_ladder.push_back(x);
    }
  }
  if (has(top, "seed")) {
    const long long seed = get_integer(top.at("seed"), "seed");
    if (seed < 0) fail(top.at("seed").line, "'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (has(top, "output")) {
    const Entry& e = top.at("output");
    if (!e.value.is_string()) fail(e.line, "'output' must be a string");
    cfg.output = e.value.get<std::string>();
  }
  if (has(top, "mask_radius")) {
    cfg.mask_radius = get_number(top.at("mask_radius"), "mask_radius");
    if (cfg.mask_radius < 0.0) fail(top.at("mask_radius").line, "'mask_radius' must be >= 0");
  }

  const Section& vort = sections["vortices"];
  const int vline = section_line.count("vortices") ? section_line["vortices"] : line_no;
  if (has(vort, "positives")) cfg.vortices.positives = get_points(vort.at("positives"), "positives");
  if (has(vort, "negatives")) cfg.vortices.negatives = get_points(vort.at("negatives"), "negatives");
  if (cfg.vortices.m() <= cfg.vortices.n()) {
    throw Error(ErrorKind::Scope,
                "line " + std::to_string(vline) + ": the vortex configuration has m=" +
                    std::to_string(cfg.vortices.m()) + ", n=" + std::to_string(cfg.vortices.n()) +
                    "; the two-solution result requires m > n");
  }

  if (sections.count("physical")) {
    const Section& ph = sections["physical"];
    for (const char* k : {"lambda", "eps", "s"}) {
      if (has(top, k)) {
        fail(top.at(k).line, std::string("'") + k + "' conflicts with the [physical] section");
      }
    }
    PhysicalConstants pc;
    for (const char* k : {"q", "kappa", "S"}) {
      if (!has(ph, k)) fail(section_line["physical"], std::string("[physical] needs '") + k + "'");
    }
    pc.q = get_number(ph.at("q"), "q");
    pc.kappa = get_number(ph.at("kappa"), "kappa");
    pc.S = get_number(ph.at("S"), "S");
    try {
      const PhysicalMapping m = map_physical_params(pc.q, pc.kappa, pc.S);
      cfg.eps = m.eps;
      cfg.s = m.s;
      cfg.lambda = m.lambda;
    } catch (const Error& err) {
      fail(section_line["physical"], err.what());
    }
    cfg.physical = pc;
  }

  const Section& sol = sections["solver"];
  SolverOptions& o = cfg.solver;
  auto pos_real = [&](const char* k, double& dst) {
    if (!has(sol, k)) return;
    dst = get_number(sol.at(k), k);
    if (!(dst > 0.0)) fail(sol.at(k).line, std::string("'") + k + "' must be positive");
  };
  auto pos_int = [&](const char* k, int& dst, int lo) {
    if (!has(sol, k)) return;
    const long long v = get_integer(sol.at(k), k);
    if (v < lo || v > 100000000) {
      fail(sol.at(k).line, std::string("'") + k + "' must be an integer >= " + std::to_string(lo));
    }
    dst = static_cast<int>(v);
  };
  pos_real("descent_tol", o.descent_tol);
  pos_real("newton_tol", o.newton_tol);
  pos_real("armijo", o.armijo);
  pos_real("tau", o.tau);
  pos_real("gmres_rtol", o.gmres_rtol);
  pos_real("mp_tol", o.mp_tol);
  pos_real("separation", o.separation);
  pos_int("max_descent_iter", o.max_descent_iter, 1);
  pos_int("max_newton_iter", o.max_newton_iter, 1);
  pos_int("gmres_restart", o.gmres_restart, 1);
  pos_int("gmres_cycles", o.gmres_cycles, 1);
  pos_int("path_nodes", o.path_nodes, 3);
  pos_int("max_mp_iter", o.max_mp_iter, 1);
  pos_int("redistribute_every", o.redistribute_every, 1);
  if (o.armijo >= 0.5) fail(sol.at("armijo").line, "'armijo' must be below 0.5");

  const AssumptionAudit audit = check_assumptions(*profile_by_name(cfg.profile), cfg.s);
  if (!audit.pass()) {
    const int line = cfg.physical ? section_line["physical"]
                                  : (has(top, "s") ? top.at("s").line : 1);
    throw Error(ErrorKind::Parameter, "line " + std::to_string(line) +
                                          ": profile assumption audit failed: " + audit.message);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  auto kv = [&](const char* key, const json& v) { out << key << " = " << v.dump() << '\n'; };
  kv("grid_n", c.grid_n);
  kv("profile", c.profile);
  if (!c.physical) {
    kv("s", c.s);
    if (c.lambda) {
      kv("lambda", *c.lambda);
    } else {
      kv("lambda", "auto");
    }
    kv("eps", c.eps);
  }
  kv("lambda_factor", c.lambda_factor);
  kv("eps_ladder", c.eps_ladder);
  kv("seed", c.seed);
  kv("output", c.output);
  kv("mask_radius", c.mask_radius);
  out << "\n[vortices]\n";
  kv("positives", points_json(c.vortices.positives));
  kv("negatives", points_json(c.vortices.negatives));
  if (c.physical) {
    out << "\n[physical]\n";
    kv("q", c.physical->q);
    kv("kappa", c.physical->kappa);
    kv("S", c.physical->S);
  }
  const SolverOptions& o = c.solver;
  out << "\n[solver]\n";
  kv("descent_tol", o.descent_tol);
  kv("newton_tol", o.newton_tol);
  kv("armijo", o.armijo);
  kv("tau", o.tau);
  kv("max_descent_iter", o.max_descent_iter);
  kv("max_newton_iter", o.max_newton_iter);
  kv("gmres_rtol", o.gmres_rtol);
  kv("gmres_restart", o.gmres_restart);
  kv("gmres_cycles", o.gmres_cycles);
  kv("path_nodes", o.path_nodes);
  kv("mp_tol", o.mp_tol);
  kv("max_mp_iter", o.max_mp_iter);
  kv("redistribute_every", o.redistribute_every);
  kv("separation", o.separation);
  return out.str();
}

}  // namespace mcsv

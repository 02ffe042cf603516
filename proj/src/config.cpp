#include "curvlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "curvlab/charts.hpp"

namespace curvlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

/// split on commas that are not inside quotes or parentheses
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (!quoted) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        out.push_back(trim(cur));
        cur.clear();
        continue;
      }
    }
    cur += c;
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + s + "'");
  }
}

long long to_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + s + "'");
  }
}

bool to_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(line, "expected a boolean, got '" + s + "'");
}

struct RawEntry {
  std::string value;
  int line;
};

using Section = std::map<std::string, RawEntry>;

TaskRequest parse_task_request(const std::string& token, int line) {
  TaskRequest req;
  auto paren = token.find('(');
  if (paren == std::string::npos) {
    req.base = token;
    req.instance = token;
    return req;
  }
  if (token.back() != ')') throw ConfigError(line, "malformed task '" + token + "'");
  req.base = trim(token.substr(0, paren));
  std::string inner = token.substr(paren + 1, token.size() - paren - 2);
  std::string norm;
  for (const auto& kv : split_list(inner)) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "task parameter must be key=value in '" + token + "'");
    std::string k = trim(kv.substr(0, eq));
    double v = to_double(trim(kv.substr(eq + 1)), line);
    req.params[k] = v;
    if (!norm.empty()) norm += ",";
    norm += k + "=" + trim(kv.substr(eq + 1));
  }
  req.instance = req.base + "(" + norm + ")";
  return req;
}

Chart build_chart(const Section& sec) {
  auto get = [&](const std::string& key) -> const RawEntry* {
    auto it = sec.find(key);
    return it == sec.end() ? nullptr : &it->second;
  };

  if (const RawEntry* builtin = get("builtin")) {
    const std::string kind = builtin->value;
    if (kind == "sphere_polar") {
      const RawEntry* n = get("n");
      if (!n) throw ConfigError(builtin->line, "sphere_polar needs n");
      std::string factor;
      if (const RawEntry* f = get("conformal_factor")) factor = unquote(f->value);
      return charts::sphere_polar(static_cast<int>(to_int(n->value, n->line)), factor);
    }
    if (kind == "torus") {
      const RawEntry* n = get("n");
      if (!n) throw ConfigError(builtin->line, "torus needs n");
      const int dim = static_cast<int>(to_int(n->value, n->line));
      double period = 6.283185307179586476925286766559;
      if (const RawEntry* p = get("period")) period = to_double(p->value, p->line);
      if (const RawEntry* w = get("w"))
        return charts::torus_conformal(dim, period, unquote(w->value));
      if (const RawEntry* s = get("seed_metric")) {
        double amp = 0.1;
        if (const RawEntry* a = get("amplitude")) amp = to_double(a->value, a->line);
        return charts::torus_random_trig(
            dim, static_cast<std::uint64_t>(to_int(s->value, s->line)), amp);
      }
      // explicit entries g_i_j
      std::vector<std::string> entries(static_cast<std::size_t>(dim) * dim, "0");
      for (int i = 1; i <= dim; ++i)
        for (int j = 1; j <= dim; ++j) {
          std::string key = "g_" + std::to_string(i) + "_" + std::to_string(j);
          if (const RawEntry* e = get(key)) {
            entries[static_cast<std::size_t>(i - 1) * dim + (j - 1)] =
                unquote(e->value);
            entries[static_cast<std::size_t>(j - 1) * dim + (i - 1)] =
                unquote(e->value);
          } else if (i == j) {
            entries[static_cast<std::size_t>(i - 1) * dim + (j - 1)] = "1";
          }
        }
      return charts::torus(dim, period, entries);
    }
    if (kind == "flat_box") {
      const RawEntry* n = get("n");
      if (!n) throw ConfigError(builtin->line, "flat_box needs n");
      return charts::flat_box(static_cast<int>(to_int(n->value, n->line)));
    }
    if (kind == "product_s2xs2") {
      double a = 1.0, b = 1.0;
      if (const RawEntry* r = get("radii")) {
        auto parts = split_list(r->value);
        if (parts.size() != 2) throw ConfigError(r->line, "radii needs two values");
        a = to_double(parts[0], r->line);
        b = to_double(parts[1], r->line);
      }
      return charts::product_s2xs2(a, b);
    }
    throw ConfigError(builtin->line, "unknown builtin chart '" + kind + "'");
  }

  // inline chart
  const RawEntry* coords = get("coords");
  if (!coords)
    throw ConfigError("chart section needs either builtin = ... or coords = ...");
  std::vector<std::string> names = split_list(coords->value);
  const int dim = static_cast<int>(names.size());
  std::vector<std::array<double, 2>> box(dim, {0.0, 1.0});
  std::vector<bool> periodic(dim, false);
  std::vector<std::string> entries(static_cast<std::size_t>(dim) * dim, "0");
  for (int i = 0; i < dim; ++i) {
    if (const RawEntry* b = get("box_" + std::to_string(i + 1))) {
      auto parts = split_list(b->value);
      if (parts.size() != 2) throw ConfigError(b->line, "box needs lo,hi");
      box[i] = {to_double(parts[0], b->line), to_double(parts[1], b->line)};
    }
    if (const RawEntry* p = get("periodic_" + std::to_string(i + 1)))
      periodic[i] = to_bool(p->value, p->line);
  }
  for (int i = 1; i <= dim; ++i)
    for (int j = i; j <= dim; ++j) {
      std::string key = "g_" + std::to_string(i) + "_" + std::to_string(j);
      std::string text = (i == j) ? "1" : "0";
      if (const RawEntry* e = get(key)) text = unquote(e->value);
      entries[static_cast<std::size_t>(i - 1) * dim + (j - 1)] = text;
      entries[static_cast<std::size_t>(j - 1) * dim + (i - 1)] = text;
    }
  std::vector<Expression> exprs;
  exprs.reserve(entries.size());
  for (const auto& e : entries) exprs.push_back(Expression::parse(e, names));
  return Chart(names, box, periodic, std::move(exprs), "inline chart");
}

VectorFieldSpec build_field(const Section& sec, const Chart& chart) {
  auto it = sec.find("builtin");
  if (it != sec.end()) {
    auto fields = builtin_fields(chart.kind(), chart.dim());
    for (auto& f : fields)
      if (f.label == it->second.value) return f;
    throw ConfigError(it->second.line,
                      "no builtin field '" + it->second.value + "' for this chart");
  }
  auto comps = sec.find("components");
  if (comps == sec.end())
    throw ConfigError("field section needs builtin = ... or components = ...");
  auto parts = split_list(comps->second.value);
  if (static_cast<int>(parts.size()) != chart.dim())
    throw ConfigError(comps->second.line, "field component count != dimension");
  VectorFieldSpec f;
  f.label = "inline";
  for (const auto& p : parts)
    f.components.push_back(Expression::parse(unquote(p), chart.coords()));
  return f;
}

}  // namespace

int TaskRequest::param_int(const std::string& key, int fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : static_cast<int>(it->second);
}

double TaskRequest::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

TaskConfig parse_config(const std::string& text, const std::string& path) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(lineno, "malformed section header");
      current = t.substr(1, t.size() - 2);
      sections[current];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected key = value");
    if (current.empty()) throw ConfigError(lineno, "key outside any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    sections[current][key] = {value, lineno};
  }

  TaskConfig cfg;
  cfg.path = path;
  cfg.text = text;

  auto chart_it = sections.find("chart");
  if (chart_it == sections.end()) throw ConfigError("missing [chart] section");
  cfg.chart = build_chart(chart_it->second);

  if (auto it = sections.find("field"); it != sections.end() && !it->second.empty())
    cfg.field = build_field(it->second, cfg.chart);

  if (auto it = sections.find("conformal"); it != sections.end()) {
    if (auto e = it->second.find("eta"); e != it->second.end())
      cfg.eta = Expression::parse(unquote(e->second.value), cfg.chart.coords());
    if (auto e = it->second.find("h"); e != it->second.end())
      cfg.fd_step = to_double(e->second.value, e->second.line);
    if (auto e = it->second.find("t"); e != it->second.end()) {
      cfg.law_t.clear();
      for (const auto& v : split_list(e->second.value))
        cfg.law_t.push_back(to_double(v, e->second.line));
    }
  }

  auto tasks_it = sections.find("tasks");
  if (tasks_it == sections.end()) throw ConfigError("missing [tasks] section");
  {
    const Section& sec = tasks_it->second;
    auto names = sec.find("names");
    if (names == sec.end()) throw ConfigError("missing names = ... in [tasks]");
    for (const auto& tok : split_list(names->second.value))
      cfg.tasks.push_back(parse_task_request(tok, names->second.line));
    if (auto e = sec.find("seed"); e != sec.end())
      cfg.seed = static_cast<std::uint64_t>(to_int(e->second.value, e->second.line));
    if (auto e = sec.find("points"); e != sec.end())
      cfg.points = static_cast<int>(to_int(e->second.value, e->second.line));
    // per-instance tolerance overrides: <instance>.tol = value
    for (const auto& [key, entry] : sec) {
      if (key.size() > 4 && key.substr(key.size() - 4) == ".tol") {
        std::string inst = key.substr(0, key.size() - 4);
        bool found = false;
        for (auto& req : cfg.tasks)
          if (req.instance == inst || req.base == inst) {
            req.tol_override = to_double(entry.value, entry.line);
            found = true;
          }
        if (!found)
          throw ConfigError(entry.line, "tolerance override for unknown task '" +
                                            inst + "'");
      }
    }
    // duplicate instances would collide in the report
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i)
      for (std::size_t j = i + 1; j < cfg.tasks.size(); ++j)
        if (cfg.tasks[i].instance == cfg.tasks[j].instance)
          throw ConfigError("task '" + cfg.tasks[i].instance +
                            "' configured more than once");
  }

  // quadrature defaults: trapezoid on periodic axes, Gauss-Legendre otherwise
  cfg.quadrature.rules.resize(cfg.chart.dim());
  cfg.quadrature.nodes.assign(cfg.chart.dim(), 12);
  for (int a = 0; a < cfg.chart.dim(); ++a)
    cfg.quadrature.rules[a] = cfg.chart.periodic(a) ? AxisRule::TrapezoidPeriodic
                                                    : AxisRule::GaussLegendre;
  if (auto it = sections.find("quadrature"); it != sections.end()) {
    const Section& sec = it->second;
    if (auto e = sec.find("rules"); e != sec.end()) {
      auto parts = split_list(e->second.value);
      if (static_cast<int>(parts.size()) != cfg.chart.dim())
        throw ConfigError(e->second.line, "rules count != dimension");
      for (int a = 0; a < cfg.chart.dim(); ++a) {
        if (parts[a] == "gauss" || parts[a] == "gauss_legendre")
          cfg.quadrature.rules[a] = AxisRule::GaussLegendre;
        else if (parts[a] == "trapezoid" || parts[a] == "trapezoid_periodic")
          cfg.quadrature.rules[a] = AxisRule::TrapezoidPeriodic;
        else
          throw ConfigError(e->second.line, "unknown rule '" + parts[a] + "'");
      }
    }
    if (auto e = sec.find("nodes"); e != sec.end()) {
      auto parts = split_list(e->second.value);
      if (parts.size() == 1) {
        cfg.quadrature.nodes.assign(
            cfg.chart.dim(), static_cast<int>(to_int(parts[0], e->second.line)));
      } else {
        if (static_cast<int>(parts.size()) != cfg.chart.dim())
          throw ConfigError(e->second.line, "nodes count != dimension");
        for (int a = 0; a < cfg.chart.dim(); ++a)
          cfg.quadrature.nodes[a] = static_cast<int>(to_int(parts[a], e->second.line));
      }
    }
    if (auto e = sec.find("ladder"); e != sec.end()) {
      cfg.quadrature.ladder.clear();
      for (const auto& v : split_list(e->second.value))
        cfg.quadrature.ladder.push_back(to_double(v, e->second.line));
    }
    if (auto e = sec.find("axisymmetric_reduction"); e != sec.end())
      cfg.quadrature.axisymmetric_reduction = to_bool(e->second.value, e->second.line);
  }

  if (auto it = sections.find("output"); it != sections.end())
    if (auto e = it->second.find("path"); e != it->second.end())
      cfg.output_path = unquote(e->second.value);

  return cfg;
}

TaskConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace curvlab

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mosharp/errors.hpp"
#include "output.hpp"

namespace mosharp::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Typed access to one JSON object with field-path error messages.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) return require_default(key, fallback);
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(join(path_, key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path_, key) + ": expected a finite number");
    return d;
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw ConfigError(join(path_, key) + ": must be positive");
    return d;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw ConfigError(join(path_, key) + ": missing required field");
      return *fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path_, key) + ": expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw ConfigError(join(path_, key) + ": missing required field");
      return *fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(join(path_, key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback = {}) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(join(path_, key) + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(join(path_, key) + "[" + std::to_string(i) + "]: expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Point point(const std::string& key, Point fallback) {
    if (!has(key)) return fallback;
    const auto v = numbers(key);
    if (v.empty() || v.size() > 3) throw ConfigError(join(path_, key) + ": expected 1 to 3 coordinates");
    Point p{};
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
    return p;
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(join(path_, key) + ": missing required section");
    return Section(node_.at(key), join(path_, key));
  }

  std::optional<Section> optional_child(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) return std::nullopt;
    return Section(node_.at(key), join(path_, key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  /// Rejects keys that were never asked for (typos, unsupported options).
  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) throw ConfigError(join(path_, key) + ": unknown field");
  }

  std::string where() const { return path_.empty() ? "<root>" : path_; }
  const std::string& path() const { return path_; }

 private:
  double require_default(const std::string& key, std::optional<double> fallback) const {
    if (!fallback) throw ConfigError(join(path_, key) + ": missing required field");
    return *fallback;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

Weight parse_weight(Section s) {
  const std::string shape = s.string("shape");
  std::optional<Weight> w;
  if (shape == "constant") w = Weight::constant(s.positive("value"));
  else if (shape == "power_of_norm") w = Weight::power_of_norm(s.number("alpha"));
  else throw ConfigError(join(s.path(), "shape") + ": unknown weight shape '" + shape + "'");
  if (s.has("target_p")) w->target_p = s.number("target_p");
  s.finish();
  return *w;
}

ExponentField parse_exponent(Section s) {
  const std::string shape = s.string("shape");
  const double base = s.number("base");
  if (shape == "constant") {
    s.finish();
    return ExponentField::constant(base);
  }
  const double amplitude = s.number("amplitude");
  if (shape == "log_decay") {
    s.finish();
    return ExponentField::log_decay(base, amplitude);
  }
  const double r0 = s.number("r0", 0.0), r1 = s.number("r1", 1.0);
  s.finish();
  if (shape == "smooth_step") return ExponentField::smooth_step(base, amplitude, r0, r1);
  if (shape == "jump") return ExponentField::jump(base, amplitude, r0, r1);
  throw ConfigError(join(s.path(), "shape") + ": unknown exponent shape '" + shape + "'");
}

TestFunction parse_function(Section s, int dimension) {
  TestFunction::Params p;
  const std::string id = s.string("id", std::string("bump"));
  p.amplitude = s.number("amplitude", p.amplitude);
  p.radius = s.positive("radius", p.radius);
  p.inner = s.number("inner", p.inner);
  p.slope = s.point("slope", p.slope);
  p.offset = s.number("offset", p.offset);
  p.curvature = s.point("curvature", p.curvature);
  p.sigma = s.positive("sigma", p.sigma);
  p.frequency = s.number("frequency", p.frequency);
  if (s.has("poly")) {
    const auto v = s.numbers("poly");
    if (v.size() != 3) throw ConfigError(join(s.path(), "poly") + ": expected 3 coefficients");
    p.poly = {v[0], v[1], v[2]};
  }
  p.tent_width = s.positive("tent_width", p.tent_width);
  s.finish();
  try {
    return TestFunction::from_name(id, p, dimension);
  } catch (const InvalidArgument& e) {
    throw ConfigError(join(s.path(), "id") + ": " + e.what());
  }
}

}  // namespace

MusielakOrliczFunction parse_phi(const json& node, int dimension, const std::string& path) {
  Section s(node, path);
  const std::string family = s.string("family");
  std::optional<MusielakOrliczFunction> phi;
  try {
    if (family == "power") {
      phi = MusielakOrliczFunction::power(s.positive("p"), dimension);
    } else if (family == "log_power") {
      phi = MusielakOrliczFunction::orlicz(OrliczShape::LogPower, s.positive("p", 2.0), dimension);
    } else if (family == "exponential") {
      phi = MusielakOrliczFunction::orlicz(OrliczShape::Exponential, 1.0, dimension);
    } else if (family == "variable_exponent") {
      phi = MusielakOrliczFunction::variable_exponent(parse_exponent(s.child("exponent")), dimension);
    } else if (family == "weighted_power") {
      phi = MusielakOrliczFunction::weighted_power(parse_weight(s.child("weight")), s.positive("p"), dimension);
    } else if (family == "double_phase") {
      phi = MusielakOrliczFunction::double_phase(s.positive("p"), s.positive("q"), parse_weight(s.child("weight")),
                                                 dimension);
    } else {
      throw ConfigError(join(path, "family") + ": unknown Phi family '" + family + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  s.finish();
  return *phi;
}

RunConfig parse_config(const json& document) {
  RunConfig c;
  c.document = document;
  c.canonical = document.dump();
  c.hash = sha256_hex(c.canonical);

  Section root(document, "");
  c.dimension = root.integer("dimension");
  if (c.dimension < 1 || c.dimension > 3) throw ConfigError("dimension: unsupported dimension " + std::to_string(c.dimension));

  SweepSettings& s = c.sweep;
  if (auto grid = root.optional_child("grid")) {
    s.half_width = grid->positive("half_width", s.half_width);
    s.h0 = grid->positive("h0", s.h0);
    s.rows = grid->integer("rows", s.rows);
    s.ball_cells_cap = grid->integer("ball_cells_cap", 0);
    c.r_min_cells = grid->integer("r_min_cells", 2);
    grid->finish();
    if (s.rows < 1) throw ConfigError("grid.rows: must be at least 1");
    if (c.r_min_cells < 2)
      throw ConfigError("grid.r_min_cells: under-resolved ball (r_min must be at least 2h, got " +
                        std::to_string(c.r_min_cells) + "h)");
    if (c.r_min_cells != 2)
      throw ConfigError("grid.r_min_cells: only r_min = 2h is supported, got " + std::to_string(c.r_min_cells) + "h");
    if (s.ball_cells_cap < 0) throw ConfigError("grid.ball_cells_cap: must be nonnegative");
    const double cells = 2.0 * s.half_width / s.h0;
    if (std::fabs(cells - std::round(cells)) > 1e-9 * cells)
      throw ConfigError("grid.h0: 2 * half_width / h0 must be an integer");
    if (!(2.0 * s.h0 < 1.0)) throw ConfigError("grid.h0: under-resolved ball (2h must be below the unit radius)");
  }

  if (root.has("phi")) {
    c.phi = parse_phi(root.raw("phi"), c.dimension, "phi");
    c.phi->set_domain_half_width(s.half_width);
  }
  if (auto fn = root.optional_child("function")) c.function = parse_function(*fn, c.dimension);

  if (auto psi = root.optional_child("psi")) {
    const std::string family = psi->string("family", std::string("power"));
    if (family == "power") s.family = PsiFamily::Kind::Power;
    else if (family == "box") s.family = PsiFamily::Kind::Box;
    else throw ConfigError("psi.family: unknown psi family '" + family + "'");
    s.eps0 = psi->positive("eps0", s.eps0);
    psi->finish();
    if (s.family == PsiFamily::Kind::Box && s.eps0 > 1.0) throw ConfigError("psi.eps0: box kernel needs eps0 <= 1");
  }
  if (root.has("closure")) {
    try {
      s.closure = closure_from_name(root.string("closure"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("closure: ") + e.what());
    }
  }
  if (auto tol = root.optional_child("tolerances")) {
    s.bound = tol->positive("bound", s.bound);
    s.verdict_rows = tol->integer("verdict_rows", s.verdict_rows);
    tol->finish();
    if (s.verdict_rows < 1) throw ConfigError("tolerances.verdict_rows: must be at least 1");
  }
  if (auto probe = root.optional_child("probe")) {
    ProbeSpec& p = c.probe;
    p.kind = probe->string("kind");
    if (p.kind != "remainder" && p.kind != "mollified-energy" && p.kind != "poincare" && p.kind != "commutation")
      throw ConfigError("probe.kind: unknown probe '" + p.kind + "'");
    if (probe->has("points")) {
      const json& pts = probe->raw("points");
      if (!pts.is_array()) throw ConfigError("probe.points: expected an array of coordinate arrays");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string at = "probe.points[" + std::to_string(i) + "]";
        if (!pts[i].is_array() || pts[i].size() != static_cast<std::size_t>(c.dimension))
          throw ConfigError(at + ": expected " + std::to_string(c.dimension) + " coordinates");
        Point x{};
        for (int a = 0; a < c.dimension; ++a) {
          if (!pts[i][a].is_number()) throw ConfigError(at + ": expected numbers");
          x[a] = pts[i][a].get<double>();
        }
        p.points.push_back(x);
      }
    }
    p.radii = probe->numbers("radii");
    p.deltas = probe->numbers("deltas");
    p.h = probe->number("h", s.h0);
    p.epsilon = probe->positive("epsilon", p.epsilon);
    if (probe->has("frozen_constant")) p.frozen_constant = probe->positive("frozen_constant");
    p.poincare_bound = probe->positive("poincare_bound", p.poincare_bound);
    p.slack_tolerance = probe->number("slack_tolerance", p.slack_tolerance);
    probe->finish();
    for (double r : p.radii)
      if (!(r > 0.0)) throw ConfigError("probe.radii: radii must be positive");
    for (double d : p.deltas)
      if (!(d > 0.0)) throw ConfigError("probe.deltas: deltas must be positive");
  }
  if (auto out = root.optional_child("output")) {
    c.csv_name = out->string("csv", std::string());
    c.manifest_name = out->string("manifest", std::string());
    c.report_name = out->string("report", std::string());
    out->finish();
    for (const auto* name : {&c.csv_name, &c.manifest_name, &c.report_name})
      if (name->find('/') != std::string::npos) throw ConfigError("output: file names must not contain '/'");
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json document;
  try {
    document = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(document);
}

}  // namespace mosharp::cli

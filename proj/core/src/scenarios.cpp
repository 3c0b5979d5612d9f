#include "scalred/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "scalred/expression.hpp"

namespace scalred {

namespace {

// Builtins are stored as documents so that serializing one and loading it
// back goes through exactly the same code path as a user file.

constexpr const char* kJacobiArctan = R"json({
  "schema_version": 1,
  "name": "jacobi-arctan",
  "description": "Jacobi-type metric on the open quadrant with V = arctan(b/a) and e = 2 > pi/2; square-root scaling action and f = (a^2 + b^2)/2.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["a", "b"],
  "base_coordinates": ["x"],
  "parameters": {"e": 2},
  "lagrangian": "(e - atan(b/a)) * (adot^2 + bdot^2)",
  "scaling": {
    "psi": ["sqrt(s)*a", "sqrt(s)*b"],
    "f": "0.5*(a^2 + b^2)",
    "pi": ["atan(b/a)"],
    "triv_inv": ["sqrt(2*sigma)*cos(x)", "sqrt(2*sigma)*sin(x)"],
    "generator": ["0.5*a", "0.5*b"],
    "domain": ["a", "b"]
  },
  "initial": {"q": [1, 1], "qdot": [0.1, -0.2]},
  "integrator": {"steps": 2000, "horizon": 2},
  "sampling_box": {"lower": [0.2, 0.2], "upper": [2, 2], "count": 64, "seed": 1}
})json";

constexpr const char* kJacobiArctanF2 = R"json({
  "schema_version": 1,
  "name": "jacobi-arctan-f2",
  "description": "Same system as jacobi-arctan with the scaling function f = a^2 + b^2; the reduced Lagrangian is halved.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["a", "b"],
  "base_coordinates": ["x"],
  "parameters": {"e": 2},
  "lagrangian": "(e - atan(b/a)) * (adot^2 + bdot^2)",
  "scaling": {
    "psi": ["sqrt(s)*a", "sqrt(s)*b"],
    "f": "a^2 + b^2",
    "pi": ["atan(b/a)"],
    "triv_inv": ["sqrt(sigma)*cos(x)", "sqrt(sigma)*sin(x)"],
    "generator": ["0.5*a", "0.5*b"],
    "domain": ["a", "b"]
  },
  "initial": {"q": [1, 1], "qdot": [0.1, -0.2]},
  "integrator": {"steps": 2000, "horizon": 2},
  "sampling_box": {"lower": [0.2, 0.2], "upper": [2, 2], "count": 64, "seed": 1}
})json";

constexpr const char* kHarmonicOscillator = R"json({
  "schema_version": 1,
  "name": "harmonic-oscillator",
  "description": "Planar isotropic oscillator with M = k = 1 under q -> sqrt(s) q, f = |q|^2, angle chart off the negative q1 axis.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["q1", "q2"],
  "base_coordinates": ["x"],
  "parameters": {"M": 1, "k": 1},
  "lagrangian": "0.5*M*(q1dot^2 + q2dot^2) - 0.5*k*(q1^2 + q2^2)",
  "scaling": {
    "psi": ["sqrt(s)*q1", "sqrt(s)*q2"],
    "f": "q1^2 + q2^2",
    "pi": ["atan2(q2, q1)"],
    "triv_inv": ["sqrt(sigma)*cos(x)", "sqrt(sigma)*sin(x)"],
    "generator": ["0.5*q1", "0.5*q2"],
    "domain": ["q1 + sqrt(q1^2 + q2^2)"]
  },
  "initial": {"q": [1, 0.2], "qdot": [0.1, 0.5]},
  "integrator": {"steps": 1000, "horizon": 1},
  "sampling_box": {"lower": [0.2, -1], "upper": [2, 1], "count": 64, "seed": 1}
})json";

constexpr const char* kLinearCounterexample = R"json({
  "schema_version": 1,
  "name": "linear-counterexample",
  "description": "L = 2k<q, qdot> with k = 1: homogeneous and degenerate, reduced Lagrangian k*y; paired with the zero action-dependent Lagrangian.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["q1", "q2"],
  "base_coordinates": ["x"],
  "parameters": {"k": 1},
  "lagrangian": "2*k*(q1*q1dot + q2*q2dot)",
  "scaling": {
    "psi": ["sqrt(s)*q1", "sqrt(s)*q2"],
    "f": "q1^2 + q2^2",
    "pi": ["atan2(q2, q1)"],
    "triv_inv": ["sqrt(sigma)*cos(x)", "sqrt(sigma)*sin(x)"],
    "generator": ["0.5*q1", "0.5*q2"],
    "domain": ["q1 + sqrt(q1^2 + q2^2)"]
  },
  "herglotz": "0",
  "initial": {"q": [1, 0.2], "qdot": [0.1, 0.5]},
  "integrator": {"steps": 1000, "horizon": 1},
  "sampling_box": {"lower": [0.2, -1], "upper": [2, 1], "count": 64, "seed": 1}
})json";

constexpr const char* kHerglotzZero = R"json({
  "schema_version": 1,
  "name": "herglotz-zero",
  "description": "Zero action-dependent Lagrangian on the circle chart, set against the oscillator's homogeneous Lagrangian on the same scaling structure.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["q1", "q2"],
  "base_coordinates": ["x"],
  "parameters": {"M": 1, "k": 1},
  "lagrangian": "0.5*M*(q1dot^2 + q2dot^2) - 0.5*k*(q1^2 + q2^2)",
  "scaling": {
    "psi": ["sqrt(s)*q1", "sqrt(s)*q2"],
    "f": "q1^2 + q2^2",
    "pi": ["atan2(q2, q1)"],
    "triv_inv": ["sqrt(sigma)*cos(x)", "sqrt(sigma)*sin(x)"],
    "generator": ["0.5*q1", "0.5*q2"],
    "domain": ["q1 + sqrt(q1^2 + q2^2)"]
  },
  "herglotz": "0",
  "initial": {"q": [1, 0.2], "qdot": [0.1, 0.5]},
  "integrator": {"steps": 1000, "horizon": 1},
  "sampling_box": {"lower": [0.2, -1], "upper": [2, 1], "count": 64, "seed": 1}
})json";

constexpr const char* kKineticGeodesic = R"json({
  "schema_version": 1,
  "name": "kinetic-geodesic",
  "description": "Geodesics of the constant metric g = [[2, 0.5], [0.5, 1]] on the punctured plane: L = g(qdot, qdot), f = g(D, D) with D = q/2.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["q1", "q2"],
  "base_coordinates": ["x"],
  "parameters": {"g11": 2, "g12": 0.5, "g22": 1},
  "lagrangian": "g11*q1dot^2 + 2*g12*q1dot*q2dot + g22*q2dot^2",
  "scaling": {
    "psi": ["sqrt(s)*q1", "sqrt(s)*q2"],
    "f": "0.25*(g11*q1^2 + 2*g12*q1*q2 + g22*q2^2)",
    "pi": ["atan2(q2, q1)"],
    "triv_inv": [
      "2*sqrt(sigma/(g11*cos(x)^2 + 2*g12*cos(x)*sin(x) + g22*sin(x)^2))*cos(x)",
      "2*sqrt(sigma/(g11*cos(x)^2 + 2*g12*cos(x)*sin(x) + g22*sin(x)^2))*sin(x)"
    ],
    "generator": ["0.5*q1", "0.5*q2"],
    "domain": ["q1 + sqrt(q1^2 + q2^2)"]
  },
  "initial": {"q": [1, 0.2], "qdot": [0.1, 0.5]},
  "integrator": {"steps": 1000, "horizon": 1},
  "sampling_box": {"lower": [0.2, -1], "upper": [2, 1], "count": 64, "seed": 1}
})json";

constexpr const char* kPlanarTranslation = R"json({
  "schema_version": 1,
  "name": "planar-translation",
  "description": "Translation-invariant system in q2 with a q1-dependent inertia; standard abelian reduction with the flat connection dq2.",
  "dims": {"ambient": 2, "base": 1},
  "coordinates": ["q1", "q2"],
  "base_coordinates": ["x"],
  "lagrangian": "0.5*q1dot^2 + 0.5*(1 + 0.5*q1^2)*q2dot^2 - 0.5*q1^2",
  "reduced_lagrangian": "0.5*xdot^2 + 0.5*(1 + 0.5*x^2)*y^2 - 0.5*x^2",
  "abelian": {
    "group": "additive",
    "psi": ["q1", "q2 + g"],
    "pi": ["q1"],
    "connection": ["0", "1"]
  },
  "initial": {"q": [0.5, 0], "qdot": [0.3, 0.7]},
  "integrator": {"steps": 2000, "horizon": 10}
})json";

struct Entry {
  const char* name;
  const char* document;
};

constexpr Entry kBuiltins[] = {
    {"harmonic-oscillator", kHarmonicOscillator},
    {"herglotz-zero", kHerglotzZero},
    {"jacobi-arctan", kJacobiArctan},
    {"jacobi-arctan-f2", kJacobiArctanF2},
    {"kinetic-geodesic", kKineticGeodesic},
    {"linear-counterexample", kLinearCounterexample},
    {"planar-translation", kPlanarTranslation},
};

using json = nlohmann::json;

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw SchemaError((path.empty() ? "/" : path) + ": " + msg);
  }

  const json* find(const std::string& path) const {
    const json::json_pointer ptr(path);
    return root_.contains(ptr) ? &root_.at(ptr) : nullptr;
  }

  const json& require(const std::string& path) const {
    const json* j = find(path);
    if (!j) fail(path, "missing required field");
    return *j;
  }

  std::string string(const std::string& path) const {
    const json& j = require(path);
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  double number(const std::string& path) const {
    const json& j = require(path);
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  std::size_t count(const std::string& path) const {
    const json& j = require(path);
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
  }

  Vec vector(const std::string& path, std::size_t expected) const {
    const json& j = require(path);
    if (!j.is_array()) fail(path, "expected an array of numbers");
    if (j.size() != expected) {
      fail(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
    }
    Vec v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
      if (!j[i].is_number()) fail(path + "/" + std::to_string(i), "expected a number");
      v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
  }

  std::vector<std::string> strings(const std::string& path) const {
    const json& j = require(path);
    if (!j.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_string()) fail(path + "/" + std::to_string(i), "expected a string");
      out.push_back(j[i].get<std::string>());
    }
    return out;
  }

 private:
  const json& root_;
};

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<std::string> with_suffix(const std::vector<std::string>& names, const std::string& suffix) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(n + suffix);
  return out;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

class Compiler {
 public:
  Compiler(const Reader& r, const std::map<std::string, double>& params) : r_(r), params_(params) {}

  Expression scalar(const std::string& path, const std::vector<std::string>& vars) const {
    return Expression::parse(r_.string(path), vars, params_, path);
  }

  std::vector<Expression> components(const std::string& path, const std::vector<std::string>& vars,
                                     std::size_t expected) const {
    const auto src = r_.strings(path);
    if (src.size() != expected) {
      Reader::fail(path, "expected " + std::to_string(expected) + " components, got " + std::to_string(src.size()));
    }
    std::vector<Expression> out;
    for (std::size_t i = 0; i < src.size(); ++i) {
      out.push_back(Expression::parse(src[i], vars, params_, path + "/" + std::to_string(i)));
    }
    return out;
  }

 private:
  const Reader& r_;
  const std::map<std::string, double>& params_;
};

void check_names(const std::vector<std::string>& names, const std::string& path) {
  static const std::set<std::string> reserved = {"s", "sigma", "g", "y", "pi"};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& n = names[i];
    const std::string p = path + "/" + std::to_string(i);
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) {
      Reader::fail(p, "invalid variable name '" + n + "'");
    }
    if (reserved.count(n)) Reader::fail(p, "'" + n + "' is a reserved name");
    if (!seen.insert(n).second) Reader::fail(p, "duplicate name '" + n + "'");
  }
}

}  // namespace

ReducedLagrangian Scenario::reduced() const {
  if (direct_reduced) return *direct_reduced;
  if (lagrangian && scaling) return reduce_lagrangian(*lagrangian, *scaling);
  throw LookupError("scenario '" + name + "' has neither a reduced Lagrangian nor a scaling structure");
}

ReducedPoint Scenario::initial_reduced() const {
  if (initial.x) return {*initial.x, *initial.xdot, *initial.y};
  if (initial.q && scaling) return atiyah_forward(*scaling, *initial.q, *initial.qdot);
  if (initial.q && abelian) return abelian->project(*initial.q, *initial.qdot);
  throw LookupError("scenario '" + name + "' has no reduced initial state");
}

Scenario load_json(const json& doc) {
  if (!doc.is_object()) Reader::fail("", "expected a JSON object");
  const Reader r(doc);
  const json& version = r.require("/schema_version");
  if (!version.is_number_integer() || version.get<int>() != 1) Reader::fail("/schema_version", "unsupported version");

  Scenario s;
  s.name = r.string("/name");
  if (r.find("/description")) s.description = r.string("/description");

  const std::size_t n = r.count("/dims/ambient");
  const std::size_t k = r.count("/dims/base");
  if (n == 0) Reader::fail("/dims/ambient", "must be positive");

  s.coordinates = r.find("/coordinates") ? r.strings("/coordinates") : numbered("q", n);
  s.base_coordinates = r.find("/base_coordinates") ? r.strings("/base_coordinates") : numbered("x", k);
  if (s.coordinates.size() != n) {
    Reader::fail("/coordinates", "expected " + std::to_string(n) + " names to match /dims/ambient");
  }
  if (s.base_coordinates.size() != k) {
    Reader::fail("/base_coordinates", "expected " + std::to_string(k) + " names to match /dims/base");
  }
  check_names(s.coordinates, "/coordinates");
  check_names(s.base_coordinates, "/base_coordinates");

  if (const json* p = r.find("/parameters")) {
    if (!p->is_object()) Reader::fail("/parameters", "expected an object");
    for (const auto& [key, value] : p->items()) {
      if (!value.is_number()) Reader::fail("/parameters/" + key, "expected a number");
      s.parameters[key] = value.get<double>();
    }
  }

  const Compiler c(r, s.parameters);
  const auto& q = s.coordinates;
  const auto& x = s.base_coordinates;
  const auto qdot = with_suffix(q, "dot");
  const auto xdot = with_suffix(x, "dot");
  const auto reduced_vars = concat({x, xdot, {"y"}});

  if (r.find("/lagrangian")) {
    s.lagrangian = LagrangianSystem{n, to_field(c.scalar("/lagrangian", concat({q, qdot})))};
  }

  if (r.find("/scaling")) {
    if (k + 1 != n) Reader::fail("/dims/base", "a scaling symmetry needs base = ambient - 1");
    ScalingSystem sys;
    sys.ambient_dim = n;
    sys.base_dim = k;
    sys.psi = to_field(c.components("/scaling/psi", concat({{"s"}, q}), n));
    sys.f = to_field(c.scalar("/scaling/f", q));
    sys.pi = to_field(c.components("/scaling/pi", q, k));
    sys.triv_inv = to_field(c.components("/scaling/triv_inv", concat({x, {"sigma"}}), n));
    if (r.find("/scaling/generator")) sys.generator = to_field(c.components("/scaling/generator", q, n));
    if (const json* d = r.find("/scaling/domain")) {
      sys.domain = to_field(c.components("/scaling/domain", q, d->is_array() ? d->size() : 0));
    }
    sys.check_dimensions();
    s.scaling = std::move(sys);
  }

  if (r.find("/herglotz")) {
    s.herglotz = HerglotzLagrangian{k, to_field(c.scalar("/herglotz", reduced_vars))};
  }
  if (r.find("/reduced_lagrangian")) {
    s.direct_reduced =
        ReducedLagrangian{k, to_field(c.scalar("/reduced_lagrangian", reduced_vars)), Provenance::direct};
  }

  if (r.find("/abelian")) {
    if (k + 1 != n) Reader::fail("/dims/base", "a one-parameter symmetry needs base = ambient - 1");
    AbelianSymmetry sym;
    const std::string group = r.string("/abelian/group");
    if (group == "additive") {
      sym.group = AbelianGroup::additive;
    } else if (group == "multiplicative") {
      sym.group = AbelianGroup::multiplicative;
    } else {
      Reader::fail("/abelian/group", "expected \"additive\" or \"multiplicative\"");
    }
    sym.ambient_dim = n;
    sym.psi = to_field(c.components("/abelian/psi", concat({{"g"}, q}), n));
    sym.pi = to_field(c.components("/abelian/pi", q, k));
    sym.connection = to_field(c.components("/abelian/connection", q, n));
    s.abelian = std::move(sym);
  }

  if (!s.lagrangian && !s.herglotz && !s.direct_reduced) {
    Reader::fail("/lagrangian", "missing required field (or one of /herglotz, /reduced_lagrangian)");
  }

  r.require("/initial");
  if (r.find("/initial/q")) {
    s.initial.q = r.vector("/initial/q", n);
    s.initial.qdot = r.vector("/initial/qdot", n);
  } else if (r.find("/initial/x")) {
    s.initial.x = r.vector("/initial/x", k);
    s.initial.xdot = r.vector("/initial/xdot", k);
    s.initial.y = r.number("/initial/y");
  } else {
    Reader::fail("/initial/q", "missing required field (or /initial/x)");
  }
  if (s.initial.q && s.scaling && !s.scaling->in_chart(*s.initial.q)) {
    Reader::fail("/initial/q", "initial configuration lies outside the chart");
  }

  if (r.find("/integrator")) {
    s.integrator.steps = r.count("/integrator/steps");
    s.integrator.horizon = r.number("/integrator/horizon");
    try {
      s.integrator.validate();
    } catch (const std::exception& e) {
      Reader::fail("/integrator", e.what());
    }
  }

  if (r.find("/sampling_box")) {
    SamplingBox box;
    box.lower = r.vector("/sampling_box/lower", n);
    box.upper = r.vector("/sampling_box/upper", n);
    if (r.find("/sampling_box/count")) box.count = r.count("/sampling_box/count");
    if (r.find("/sampling_box/seed")) box.seed = r.count("/sampling_box/seed");
    if (r.find("/sampling_box/scale_min")) box.scale_min = r.number("/sampling_box/scale_min");
    if (r.find("/sampling_box/scale_max")) box.scale_max = r.number("/sampling_box/scale_max");
    try {
      box.validate(n);
    } catch (const std::exception& e) {
      Reader::fail("/sampling_box", e.what());
    }
    s.box = std::move(box);
  } else if (s.scaling) {
    Reader::fail("/sampling_box", "missing required field (needed by the scaling validators)");
  }

  if (r.find("/tolerances")) {
    auto opt = [&r](const char* key, double& slot) {
      const std::string path = std::string("/tolerances/") + key;
      if (r.find(path)) slot = r.number(path);
    };
    opt("validation", s.tolerances.validation);
    opt("reconstruction", s.tolerances.reconstruction);
    opt("el_residual", s.tolerances.el_residual);
    opt("proportionality", s.tolerances.proportionality);
    opt("variation", s.tolerances.variation);
  }

  s.document_ = doc;
  return s;
}

Scenario builtin(const std::string& name) {
  for (const auto& e : kBuiltins) {
    if (name == e.name) return load_json(json::parse(e.document));
  }
  std::string known;
  for (const auto& e : kBuiltins) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw LookupError("unknown scenario '" + name + "'; registered: " + known);
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& e : kBuiltins) out.emplace_back(e.name);
  return out;
}

Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": malformed JSON (" + e.what() + ")");
  }
  return load_json(doc);
}

Scenario resolve(const std::string& name_or_path) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
  std::ifstream probe(name_or_path);
  if (!probe) return builtin(name_or_path);
  return load(name_or_path);
}

json to_json(const Scenario& s) { return s.document(); }

}  // namespace scalred

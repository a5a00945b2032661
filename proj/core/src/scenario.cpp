#include "symform/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "symform/dynamics.hpp"
#include "symform/error.hpp"

namespace symform {

namespace {

using nlohmann::json;

// Walks a JSON document while keeping the field path for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) throw ConfigError(join(key), "missing required field");
    return {value_.at(key), join(key)};
  }

  Node item(std::size_t index) const { return {value_.at(index), path_ + "[" + std::to_string(index) + "]"}; }

  void require_object(const std::set<std::string>& allowed) const {
    if (!value_.is_object()) fail("expected an object");
    for (const auto& [key, _] : value_.items()) {
      if (!allowed.contains(key)) throw ConfigError(join(key.c_str()), "unknown field");
    }
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  std::uint64_t unsigned_integer() const {
    if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<std::int64_t>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return value_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  Eigen::VectorXd vector(Eigen::Index expected) const {
    const std::size_t size = array_size();
    if (static_cast<Eigen::Index>(size) != expected) {
      fail("expected " + std::to_string(expected) + " components, got " + std::to_string(size));
    }
    Eigen::VectorXd out(expected);
    for (std::size_t k = 0; k < size; ++k) out(static_cast<Eigen::Index>(k)) = item(k).number();
    return out;
  }

 private:
  std::string join(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

  const json& value_;
  std::string path_;
};

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

Eigen::Vector3d parse_axis(const Node& node) {
  if (node.value().is_string()) {
    const auto name = node.string();
    if (name == "x") return Eigen::Vector3d::UnitX();
    if (name == "y") return Eigen::Vector3d::UnitY();
    if (name == "z") return Eigen::Vector3d::UnitZ();
    node.fail("axis must be \"x\", \"y\", \"z\" or a 3-vector");
  }
  const Eigen::Vector3d axis = node.vector(3);
  if (axis.norm() < 1e-12) node.fail("axis must be nonzero");
  return axis.normalized();
}

SymmetryChain parse_chain(const Node& node, const SymmetryChain& fallback) {
  node.require_object({"nodes", "axis", "links"});
  SymmetryChain chain = fallback;
  if (node.has("nodes")) {
    const Node nodes = node.at("nodes");
    chain.nodes.clear();
    for (std::size_t k = 0; k < nodes.array_size(); ++k) chain.nodes.push_back(nodes.item(k).integer());
  }
  if (node.has("axis")) chain.axis = parse_axis(node.at("axis"));
  if (node.has("links")) {
    const Node links = node.at("links");
    chain.links.clear();
    for (std::size_t k = 0; k < links.array_size(); ++k) chain.links.push_back(links.item(k).integer());
  }
  return chain;
}

InteractionGraph parse_tree(const Node& root, int n) {
  if (root.has("remove") && root.has("edges")) root.fail("give either \"remove\" or \"edges\", not both");
  if (root.has("edges")) {
    const Node edges = root.at("edges");
    InteractionGraph g{n, 2, {}};
    for (std::size_t k = 0; k < edges.array_size(); ++k) {
      const Node e = edges.item(k);
      const std::size_t len = e.array_size();
      if (len != 2 && len != 3) e.fail("edge must be [u, v] or [u, v, shift]");
      const int shift = len == 3 ? e.item(2).integer() : 1;
      g.edges.push_back({e.item(0).integer(), e.item(1).integer(), CyclicAutomorphism(n, shift)});
    }
    if (auto report = validate(g); !report) edges.fail(*report.violation);
    return g;
  }
  Edge removed{n, 1};
  if (root.has("remove")) {
    const Node r = root.at("remove");
    if (r.array_size() != 2) r.fail("expected [u, v]");
    removed = {r.item(0).integer(), r.item(1).integer()};
    if (!CycleGraph(n).contains(removed)) r.fail("not an edge of C_" + std::to_string(n));
  }
  return cycle_minus_edge(n, removed);
}

InputSegment parse_segment(const Node& node, int d) {
  node.require_object({"t_start", "t_end", "v", "omega", "alpha"});
  InputSegment s;
  s.t_start = node.at("t_start").number();
  s.t_end = node.at("t_end").number();
  if (!(s.t_end > s.t_start)) node.at("t_end").fail("must exceed t_start");
  s.velocity = node.has("v") ? node.at("v").vector(d) : Eigen::VectorXd::Zero(d);
  if (d == 2) {
    s.omega = Eigen::VectorXd::Constant(1, node.has("omega") ? node.at("omega").number() : 0.0);
  } else {
    s.omega = node.has("omega") ? node.at("omega").vector(3) : Eigen::VectorXd::Zero(3);
  }
  s.alpha = node.has("alpha") ? node.at("alpha").number() : 0.0;
  return s;
}

std::vector<InputSegment> parse_waypoints(const Node& node, double initial_heading) {
  node.require_object({"points", "speed"});
  const Node points = node.at("points");
  std::vector<Waypoint> waypoints;
  for (std::size_t k = 0; k < points.array_size(); ++k) {
    const Node p = points.item(k);
    if (p.value().is_array()) {
      waypoints.push_back({p.vector(2), 1.0});
    } else {
      p.require_object({"x", "y", "scale"});
      Waypoint w{{p.at("x").number(), p.at("y").number()}, 1.0};
      if (p.has("scale")) {
        w.scale = p.at("scale").number();
        if (!(w.scale > 0.0)) p.at("scale").fail("must be positive");
      }
      waypoints.push_back(w);
    }
  }
  const Node speed = node.at("speed");
  if (!(speed.number() > 0.0)) speed.fail("must be positive");
  try {
    return segments_from_waypoints(waypoints, speed.number(), 0.0, initial_heading);
  } catch (const InvalidArgument& e) {
    points.fail(e.what());
  }
}

ReferenceSpec parse_reference(const Node& node, int d) {
  node.require_object({"r0", "angle0", "axis0", "scale0", "segments", "waypoints", "pad_to_horizon"});
  ReferenceSpec ref{ReferenceState::identity(d), {}, true};
  if (node.has("r0")) ref.initial.r = node.at("r0").vector(d);
  const double angle0 = node.has("angle0") ? node.at("angle0").number() : 0.0;
  if (d == 2) {
    if (node.has("axis0")) node.at("axis0").fail("planar references have no axis");
    ref.initial.rotation = Rotation::planar(angle0);
  } else {
    const Eigen::Vector3d axis = node.has("axis0") ? parse_axis(node.at("axis0")) : Eigen::Vector3d::UnitZ();
    ref.initial.rotation = Rotation::spatial(axis, angle0);
  }
  if (node.has("scale0")) {
    ref.initial.scale = node.at("scale0").number();
    if (!(ref.initial.scale > 0.0)) node.at("scale0").fail("must be positive");
  }
  if (node.has("segments") && node.has("waypoints")) node.fail("give either \"segments\" or \"waypoints\"");
  if (node.has("segments")) {
    const Node segs = node.at("segments");
    for (std::size_t k = 0; k < segs.array_size(); ++k) ref.segments.push_back(parse_segment(segs.item(k), d));
  } else if (node.has("waypoints")) {
    if (d != 2) node.at("waypoints").fail("waypoint paths are planar");
    ref.segments = parse_waypoints(node.at("waypoints"), angle0);
  } else {
    node.fail("missing \"segments\" or \"waypoints\"");
  }
  try {
    ReferenceInputs(d, ref.segments);
  } catch (const InvalidArgument& e) {
    node.at(node.has("segments") ? "segments" : "waypoints").fail(e.what());
  }
  if (node.has("pad_to_horizon")) ref.pad_to_horizon = node.at("pad_to_horizon").boolean();
  return ref;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json chain_json(const SymmetryChain& c) {
  return {{"nodes", c.nodes}, {"axis", vector_json(c.axis)}, {"links", c.links}};
}

void resolve_timing(Scenario& s, const std::optional<double>& dt, const std::optional<double>& horizon) {
  const Spectrum spec = spectrum(s.laplacian());
  s.dt_defaulted = !dt.has_value();
  s.horizon_defaulted = !horizon.has_value();
  s.dt = dt.value_or(default_time_step(spec));
  double h = default_horizon(spec);
  if (s.reference && !s.reference->segments.empty()) h = std::max(h, s.reference->segments.back().t_end);
  s.horizon = horizon.value_or(h);
  if (!(s.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (s.dt * spec.lambda_max() >= 2.0) {
    throw ConfigError("dt", "step " + std::to_string(s.dt) + " is unstable; use dt <= " +
                                std::to_string(default_time_step(spec)));
  }
  if (!(s.horizon >= s.dt)) throw ConfigError("horizon", "must be at least dt");
  if (s.reference && !s.reference->pad_to_horizon) {
    const double end = s.reference->segments.back().t_end;
    const double t_final = static_cast<double>(step_count(s.dt, s.horizon)) * s.dt;
    if (end + 1e-12 < t_final) {
      throw ConfigError("reference.segments", "inputs end at " + std::to_string(end) +
                                                  " before the simulated horizon " + std::to_string(t_final));
    }
  }
}

}  // namespace

RotationGraph Scenario::constraint_graph() const {
  if (kind == FormationKind::kCube) return build_cube(cube).q.graph;
  return with_rotations(graph, assignment(n));
}

SymmetryLaplacian Scenario::laplacian() const { return build_laplacian(constraint_graph()); }

Eigen::VectorXd Scenario::initial_configuration() const {
  if (initial.positions) return Configuration::from_positions(*initial.positions).values();
  return Configuration::random_box(n, dimension, initial.box_lo, initial.box_hi, seed).values();
}

std::optional<ReferenceInputs> Scenario::reference_inputs() const {
  if (!reference) return std::nullopt;
  std::vector<InputSegment> segments = reference->segments;
  const double t_final = static_cast<double>(step_count(dt, horizon)) * dt;
  if (reference->pad_to_horizon && segments.back().t_end < t_final) {
    const int w = dimension == 2 ? 1 : 3;
    segments.push_back({segments.back().t_end, t_final, Eigen::VectorXd::Zero(dimension),
                        Eigen::VectorXd::Zero(w), 0.0});
  }
  return ReferenceInputs(dimension, std::move(segments));
}

Scenario parse_scenario(const std::string& text, const std::string& default_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_column(text, e.byte == 0 ? 0 : e.byte - 1), "JSON syntax error");
  }
  const Node root(doc, "");
  root.require_object({"name", "formation", "dimension", "n", "remove", "edges", "cube", "seed", "initial",
                       "reference", "dt", "horizon", "output"});

  Scenario s;
  s.name = root.has("name") ? root.at("name").string() : default_name;
  if (s.name.empty()) root.at("name").fail("must not be empty");

  const std::string formation = root.has("formation") ? root.at("formation").string() : "cycle";
  if (formation == "cycle") {
    s.kind = FormationKind::kCycle;
  } else if (formation == "cube") {
    s.kind = FormationKind::kCube;
  } else {
    root.at("formation").fail("expected \"cycle\" or \"cube\"");
  }

  const int default_dim = s.kind == FormationKind::kCube ? 3 : 2;
  s.dimension = root.has("dimension") ? root.at("dimension").integer() : default_dim;
  if (s.dimension != default_dim) {
    root.at("dimension").fail("formation \"" + formation + "\" requires dimension " + std::to_string(default_dim));
  }

  if (s.kind == FormationKind::kCycle) {
    const Node n = root.at("n");
    s.n = n.integer();
    if (s.n < 3) n.fail("must be at least 3");
    if (root.has("cube")) root.at("cube").fail("only valid for the cube formation");
    s.graph = parse_tree(root, s.n);
  } else {
    s.n = 8;
    if (root.has("n") && root.at("n").integer() != 8) root.at("n").fail("the cube formation has 8 agents");
    if (root.has("remove") || root.has("edges")) root.fail("cube constraints are given under \"cube\"");
    if (root.has("cube")) {
      const Node cube = root.at("cube");
      cube.require_object({"top", "bottom", "cross"});
      const CubeSpec fallback = CubeSpec::standard();
      if (cube.has("top")) s.cube.top = parse_chain(cube.at("top"), fallback.top);
      if (cube.has("bottom")) s.cube.bottom = parse_chain(cube.at("bottom"), fallback.bottom);
      if (cube.has("cross")) s.cube.cross = parse_chain(cube.at("cross"), fallback.cross);
      try {
        build_cube(s.cube);
      } catch (const InvalidArgument& e) {
        cube.fail(e.what());
      }
    }
  }

  if (root.has("seed")) s.seed = root.at("seed").unsigned_integer();

  if (root.has("initial")) {
    const Node init = root.at("initial");
    init.require_object({"box", "positions"});
    if (init.has("box") && init.has("positions")) init.fail("give either \"box\" or \"positions\"");
    if (init.has("box")) {
      const Node box = init.at("box");
      if (box.array_size() != 2) box.fail("expected [lo, hi]");
      s.initial.box_lo = box.item(0).number();
      s.initial.box_hi = box.item(1).number();
      if (!(s.initial.box_lo < s.initial.box_hi)) box.fail("needs lo < hi");
    }
    if (init.has("positions")) {
      const Node pos = init.at("positions");
      if (pos.array_size() != static_cast<std::size_t>(s.n)) {
        pos.fail("expected " + std::to_string(s.n) + " positions");
      }
      std::vector<Eigen::VectorXd> positions;
      for (std::size_t k = 0; k < pos.array_size(); ++k) positions.push_back(pos.item(k).vector(s.dimension));
      s.initial.positions = std::move(positions);
    }
  }

  if (root.has("reference")) s.reference = parse_reference(root.at("reference"), s.dimension);

  std::optional<double> dt, horizon;
  if (root.has("dt")) dt = root.at("dt").number();
  if (root.has("horizon")) horizon = root.at("horizon").number();
  resolve_timing(s, dt, horizon);

  s.output_dir = root.has("output") ? std::filesystem::path(root.at("output").string())
                                    : std::filesystem::path("out") / s.name;
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str(), path.stem().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ":" + e.where(), e.message());
  }
}

void apply_overrides(Scenario& s, const ScenarioOverrides& o) {
  if (o.seed) s.seed = *o.seed;
  if (o.output_dir) s.output_dir = *o.output_dir;
  if (o.dt || o.horizon) {
    std::optional<double> dt = o.dt;
    std::optional<double> horizon = o.horizon;
    if (!dt && !s.dt_defaulted) dt = s.dt;
    if (!horizon && !s.horizon_defaulted) horizon = s.horizon;
    resolve_timing(s, dt, horizon);
  }
}

std::string to_json(const Scenario& s) {
  json out;
  out["name"] = s.name;
  out["formation"] = s.kind == FormationKind::kCube ? "cube" : "cycle";
  out["dimension"] = s.dimension;
  out["n"] = s.n;
  if (s.kind == FormationKind::kCycle) {
    json edges = json::array();
    for (const auto& e : s.graph.edges) edges.push_back({e.u, e.v, e.forward.shift()});
    out["edges"] = edges;
  } else {
    out["cube"] = {{"top", chain_json(s.cube.top)},
                   {"bottom", chain_json(s.cube.bottom)},
                   {"cross", chain_json(s.cube.cross)}};
  }
  out["seed"] = s.seed;
  if (s.initial.positions) {
    json pos = json::array();
    for (const auto& p : *s.initial.positions) pos.push_back(vector_json(p));
    out["initial"] = {{"positions", pos}};
  } else {
    out["initial"] = {{"box", {s.initial.box_lo, s.initial.box_hi}}};
  }
  if (s.reference) {
    json segs = json::array();
    for (const auto& seg : s.reference->segments) {
      json j = {{"t_start", seg.t_start}, {"t_end", seg.t_end}, {"v", vector_json(seg.velocity)},
                {"alpha", seg.alpha}};
      j["omega"] = s.dimension == 2 ? json(seg.omega(0)) : vector_json(seg.omega);
      segs.push_back(std::move(j));
    }
    json ref = {{"r0", vector_json(s.reference->initial.r)},
                {"scale0", s.reference->initial.scale},
                {"segments", segs},
                {"pad_to_horizon", s.reference->pad_to_horizon}};
    if (s.dimension == 2) {
      ref["angle0"] = s.reference->initial.rotation.angle().value_or(0.0);
    } else {
      ref["angle0"] = s.reference->initial.rotation.angle().value_or(0.0);
      ref["axis0"] = vector_json(s.reference->initial.rotation.axis().value_or(Eigen::Vector3d::UnitZ()));
    }
    out["reference"] = std::move(ref);
  }
  out["dt"] = s.dt;
  out["horizon"] = s.horizon;
  out["output"] = s.output_dir.string();
  return out.dump(2);
}

}  // namespace symform
